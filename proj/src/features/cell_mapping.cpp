#include <map>
#include <numbers>

#include "ela/features.hpp"
#include "stats.hpp"

namespace ela::features {

FeatureVector cm_angle(const sampling::SampleDesign& design, const FeatureConfig& cfg) {
    detail::require_size(design, 1, "cm_angle");
    const int blocks = cfg.cm_blocks_per_dim;
    if (blocks < 2) throw InvalidArgument("cm_angle needs at least 2 blocks per dimension");
    const int d = design.dim();
    const auto& dom = design.domain;
    const Eigen::VectorXd width = dom.width() / blocks;
    const auto& y = design.y();

    // Sparse cell map: only occupied cells exist.
    std::map<std::vector<int>, std::vector<Eigen::Index>> cells;
    for (Eigen::Index i = 0; i < design.size(); ++i) {
        std::vector<int> idx(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            const int b = static_cast<int>(std::floor((design.points(i, k) - dom.lower()[k]) / width[k]));
            idx[static_cast<std::size_t>(k)] = std::clamp(b, 0, blocks - 1);
        }
        cells[idx].push_back(i);
    }

    const double diag = width.norm();
    std::vector<double> angles, to_best, to_worst;
    for (const auto& [idx, members] : cells) {
        if (members.size() < 2) continue;
        Eigen::VectorXd center(d);
        for (int k = 0; k < d; ++k) center[k] = dom.lower()[k] + (idx[static_cast<std::size_t>(k)] + 0.5) * width[k];
        Eigen::Index best = members.front(), worst = members.front();
        for (auto i : members) {
            if (y[i] < y[best]) best = i;
            if (y[i] > y[worst]) worst = i;
        }
        const Eigen::VectorXd vb = design.points.row(best).transpose() - center;
        const Eigen::VectorXd vw = design.points.row(worst).transpose() - center;
        to_best.push_back(vb.norm() / diag);
        to_worst.push_back(vw.norm() / diag);
        const double denom = vb.norm() * vw.norm();
        if (denom > 0.0) {
            const double c = std::clamp(vb.dot(vw) / denom, -1.0, 1.0);
            angles.push_back(std::acos(c) * 180.0 / std::numbers::pi);
        }
    }

    FeatureVector fv;
    fv.push("cm_angle.dist_ctr2best.mean", detail::mean(to_best));
    fv.push("cm_angle.dist_ctr2best.sd", detail::sd(to_best));
    fv.push("cm_angle.dist_ctr2worst.mean", detail::mean(to_worst));
    fv.push("cm_angle.dist_ctr2worst.sd", detail::sd(to_worst));
    fv.push("cm_angle.angle.mean", detail::mean(angles));
    fv.push("cm_angle.angle.sd", detail::sd(angles));
    fv.push("cm_angle.frac_nonempty", static_cast<double>(cells.size()) / std::pow(static_cast<double>(blocks), d));
    fv.cost_evals = design.evals_consumed;
    return fv;
}

}  // namespace ela::features
