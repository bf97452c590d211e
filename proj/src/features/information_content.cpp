#include <array>

#include "ela/features.hpp"
#include "stats.hpp"

namespace ela::features {

namespace {

// Greedy nearest-neighbour tour starting at point 0; ties go to the lower index.
std::vector<Eigen::Index> nn_tour(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> tour{0};
    used[0] = 1;
    while (static_cast<Eigen::Index>(tour.size()) < n) {
        const Eigen::Index cur = tour.back();
        Eigen::Index next = -1;
        double best = kInf;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double d = (x.row(cur) - x.row(j)).squaredNorm();
            if (d < best) best = d, next = j;
        }
        used[static_cast<std::size_t>(next)] = 1;
        tour.push_back(next);
    }
    return tour;
}

int symbol(double slope, double eps) {
    if (slope > eps) return 1;
    if (slope < -eps) return -1;
    return 0;
}

}  // namespace

FeatureVector information_content(const sampling::SampleDesign& design, const FeatureConfig& cfg) {
    detail::require_size(design, 10, "ic");
    const auto& y = design.y();
    const auto tour = nn_tour(design.points);

    std::vector<double> slopes;
    slopes.reserve(tour.size() - 1);
    for (std::size_t i = 0; i + 1 < tour.size(); ++i) {
        const double dx = (design.points.row(tour[i + 1]) - design.points.row(tour[i])).norm();
        const double dy = y[tour[i + 1]] - y[tour[i]];
        slopes.push_back(dx > 0.0 ? dy / dx : (dy == 0.0 ? 0.0 : std::copysign(kInf, dy)));
    }

    const int count = std::max(2, cfg.ic_eps_count);
    const double step = (cfg.ic_eps_log10_max - cfg.ic_eps_log10_min) / (count - 1);
    const double pairs = static_cast<double>(slopes.size() - 1);
    const double log6 = std::log(6.0);

    double h_max = -1.0, eps_max = kNaN, eps_s = kNaN;
    std::vector<int> sym(slopes.size());
    for (int e = 0; e < count; ++e) {
        const double log_eps = cfg.ic_eps_log10_min + step * e;
        const double eps = std::pow(10.0, log_eps);
        for (std::size_t i = 0; i < slopes.size(); ++i) sym[i] = symbol(slopes[i], eps);
        std::array<int, 9> freq{};
        for (std::size_t i = 0; i + 1 < sym.size(); ++i) freq[static_cast<std::size_t>((sym[i] + 1) * 3 + sym[i + 1] + 1)]++;
        double h = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                if (a == b) continue;
                const int c = freq[static_cast<std::size_t>(a * 3 + b)];
                if (c == 0) continue;
                const double p = c / pairs;
                h -= p * std::log(p) / log6;
            }
        if (h > h_max) h_max = h, eps_max = log_eps;
        if (std::isnan(eps_s) && h < cfg.ic_settling_threshold) eps_s = log_eps;
    }

    FeatureVector fv;
    fv.push("ic.h_max", h_max);
    fv.push("ic.eps_s", eps_s);
    fv.push("ic.eps_max", eps_max);
    fv.cost_evals = design.evals_consumed;
    return fv;
}

}  // namespace ela::features
