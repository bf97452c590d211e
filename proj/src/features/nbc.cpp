#include "ela/features.hpp"
#include "stats.hpp"

namespace ela::features {

namespace {

// Ratio of two spreads; two zero spreads count as equal.
double spread_ratio(double a, double b) {
    if (a == 0.0 && b == 0.0) return 1.0;
    if (b == 0.0 || std::isnan(a) || std::isnan(b)) return kNaN;
    return a / b;
}

}  // namespace

FeatureVector nbc(const sampling::SampleDesign& design, const FeatureConfig&) {
    detail::require_size(design, 5, "nbc");
    const Eigen::Index n = design.size();
    const auto& y = design.y();
    const Eigen::MatrixXd dist = detail::distance_matrix(design.points);

    // j is better than i when y_j < y_i, ties broken by the lower index.
    auto better = [&](Eigen::Index j, Eigen::Index i) { return y[j] < y[i] || (y[j] == y[i] && j < i); };

    std::vector<double> nn, nb;
    std::vector<double> indegree(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        double nn_d = kInf, nb_d = kInf;
        Eigen::Index nb_j = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dij = dist(i, j);
            if (dij < nn_d) nn_d = dij;
            if (better(j, i) && dij < nb_d) nb_d = dij, nb_j = j;
        }
        if (nb_j < 0) continue;  // the sample's best point
        nn.push_back(nn_d);
        nb.push_back(nb_d);
        indegree[static_cast<std::size_t>(nb_j)] += 1.0;
    }

    const auto yv = detail::to_vector(y);
    FeatureVector fv;
    fv.push("nbc.nn_nb.sd_ratio", spread_ratio(detail::sd(nn), detail::sd(nb)));
    fv.push("nbc.nn_nb.mean_ratio", spread_ratio(detail::mean(nn), detail::mean(nb)));
    fv.push("nbc.nn_nb.cor", detail::pearson(nn, nb));
    fv.push("nbc.nb_fitness.cor", detail::pearson(yv, indegree));
    fv.cost_evals = design.evals_consumed;
    return fv;
}

}  // namespace ela::features
