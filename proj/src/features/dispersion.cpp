#include <numeric>

#include "ela/features.hpp"
#include "ela/rng.hpp"
#include "stats.hpp"

namespace ela::features {

namespace {

std::vector<double> pairwise(const Eigen::MatrixXd& dist, const std::vector<Eigen::Index>& idx) {
    std::vector<double> out;
    out.reserve(idx.size() * (idx.size() - 1) / 2);
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b) out.push_back(dist(idx[a], idx[b]));
    return out;
}

}  // namespace

FeatureVector dispersion(const sampling::SampleDesign& design, const FeatureConfig& cfg) {
    detail::require_size(design, 2, "disp");
    const Eigen::Index n = design.size();
    const auto& y = design.y();
    const Eigen::MatrixXd dist = detail::distance_matrix(design.points);

    // Order by objective value; equal values are ordered by a seeded random
    // key so a plateau does not always favour low indices.
    std::vector<std::uint64_t> tie_key(static_cast<std::size_t>(n));
    Rng rng(derive_seed(cfg.seed, {0xd15b}));
    for (auto& k : tie_key) k = rng();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (y[a] != y[b]) return y[a] < y[b];
        return tie_key[static_cast<std::size_t>(a)] < tie_key[static_cast<std::size_t>(b)];
    });

    const auto all = pairwise(dist, order);
    const double mean_all = detail::mean(all);
    const double median_all = detail::median(all);

    FeatureVector fv;
    for (double q : cfg.disp_quantiles) {
        const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
        double rmean = kNaN, rmed = kNaN, dmean = kNaN, dmed = kNaN;
        if (k >= 2) {
            const std::vector<Eigen::Index> best(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(k, order.size())));
            const auto sub = pairwise(dist, best);
            const double m = detail::mean(sub);
            const double md = detail::median(sub);
            rmean = m / mean_all;
            rmed = md / median_all;
            dmean = m - mean_all;
            dmed = md - median_all;
        }
        const std::string tag = detail::quantile_tag(q);
        fv.push("disp.ratio_mean_" + tag, rmean);
        fv.push("disp.ratio_median_" + tag, rmed);
        fv.push("disp.diff_mean_" + tag, dmean);
        fv.push("disp.diff_median_" + tag, dmed);
    }
    fv.cost_evals = design.evals_consumed;
    return fv;
}

}  // namespace ela::features
