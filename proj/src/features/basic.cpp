#include "ela/features.hpp"
#include "stats.hpp"

namespace ela::features {

FeatureVector basic(const sampling::SampleDesign& design, const FeatureConfig&) {
    const auto& y = design.y();
    FeatureVector fv;
    fv.push("basic.dim", design.dim());
    fv.push("basic.n", static_cast<double>(design.size()));
    fv.push("basic.lower_min", design.domain.lower().minCoeff());
    fv.push("basic.upper_max", design.domain.upper().maxCoeff());
    fv.push("basic.best", y.size() ? y.minCoeff() : kNaN);
    fv.push("basic.worst", y.size() ? y.maxCoeff() : kNaN);
    fv.cost_evals = design.evals_consumed;
    return fv;
}

}  // namespace ela::features
