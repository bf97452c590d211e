#include "ela/features.hpp"
#include "stats.hpp"

namespace ela::features {

namespace {

struct Spectrum {
    double share_needed = kNaN;  // k / ncols
    double pc1 = kNaN;
};

Spectrum explained(const Eigen::MatrixXd& m, double target) {
    if (m.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues().reverse().cwiseMax(0.0);
    const double total = ev.sum();
    if (!(total > 0.0)) return {};
    Spectrum s;
    s.pc1 = ev[0] / total;
    double cum = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        cum += ev[k] / total;
        if (cum >= target - 1e-12) {
            s.share_needed = static_cast<double>(k + 1) / static_cast<double>(ev.size());
            break;
        }
    }
    return s;
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    return c.transpose() * c / static_cast<double>(x.rows() - 1);
}

// Correlation of the columns with non-zero variance.
Eigen::MatrixXd correlation(const Eigen::MatrixXd& x, bool& dropped) {
    const Eigen::MatrixXd cov = covariance(x);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < cov.rows(); ++k) {
        if (cov(k, k) > 0.0) keep.push_back(k);
        else dropped = true;
    }
    Eigen::MatrixXd cor(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b)
            cor(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                cov(keep[a], keep[b]) / std::sqrt(cov(keep[a], keep[a]) * cov(keep[b], keep[b]));
    return cor;
}

}  // namespace

FeatureVector pca(const sampling::SampleDesign& design, const FeatureConfig& cfg) {
    const int d = design.dim();
    detail::require_size(design, d + 1, "pca");
    Eigen::MatrixXd init(design.size(), d + 1);
    init.leftCols(d) = design.points;
    init.col(d) = design.y();

    bool zero_var = false;
    const std::array<std::pair<const char*, Spectrum>, 4> parts{{
        {"cov_x", explained(covariance(design.points), cfg.pca_variance_share)},
        {"cor_x", explained(correlation(design.points, zero_var), cfg.pca_variance_share)},
        {"cov_init", explained(covariance(init), cfg.pca_variance_share)},
        {"cor_init", explained(correlation(init, zero_var), cfg.pca_variance_share)},
    }};

    FeatureVector fv;
    for (const auto& [name, s] : parts) fv.push(std::string("pca.expl_var.") + name, s.share_needed);
    for (const auto& [name, s] : parts) fv.push(std::string("pca.expl_var_PC1.") + name, s.pc1);
    fv.push("pca.zero_var", zero_var ? 1.0 : 0.0);
    fv.cost_evals = design.evals_consumed;
    return fv;
}

}  // namespace ela::features
