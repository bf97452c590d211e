#include "ela/features.hpp"
#include "stats.hpp"

namespace ela::features {

namespace {

struct Fit {
    Eigen::VectorXd coef;  // intercept first
    double adj_r2 = kNaN;
};

// Least squares through a column-pivoting QR; falls back to the minimum-norm
// (pseudoinverse) solution when the design matrix is rank deficient.
Fit least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, bool& rank_deficient) {
    Fit fit;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < a.cols()) {
        rank_deficient = true;
        fit.coef = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(a).solve(y);
    } else {
        fit.coef = qr.solve(y);
    }
    const auto n = static_cast<double>(a.rows());
    const auto p = static_cast<double>(a.cols() - 1);
    const double sst = (y.array() - y.mean()).square().sum();
    const double sse = (y - a * fit.coef).squaredNorm();
    if (sst > 0.0 && n - p - 1.0 > 0.0) {
        const double r2 = 1.0 - sse / sst;
        fit.adj_r2 = 1.0 - (1.0 - r2) * (n - 1.0) / (n - p - 1.0);
    }
    return fit;
}

}  // namespace

FeatureVector ela_meta(const sampling::SampleDesign& design, const FeatureConfig&) {
    const int d = design.dim();
    detail::require_size(design, d + 2, "ela_meta");
    const Eigen::Index n = design.size();
    const auto& x = design.points;
    const auto& y = design.y();
    bool rank_deficient = false;

    Eigen::MatrixXd lin(n, d + 1);
    lin.col(0).setOnes();
    lin.rightCols(d) = x;
    const Fit lf = least_squares(lin, y, rank_deficient);
    const Eigen::VectorXd lin_abs = lf.coef.tail(d).cwiseAbs();
    const double cmin = lin_abs.minCoeff();
    const double cmax = lin_abs.maxCoeff();

    double quad_r2 = kNaN;
    double quad_cond = kNaN;
    if (n >= 2 * d + 2) {
        Eigen::MatrixXd quad(n, 2 * d + 1);
        quad.leftCols(d + 1) = lin;
        quad.rightCols(d) = x.array().square().matrix();
        const Fit qf = least_squares(quad, y, rank_deficient);
        const Eigen::VectorXd q_abs = qf.coef.tail(d).cwiseAbs();
        quad_r2 = qf.adj_r2;
        quad_cond = q_abs.minCoeff() > 0.0 ? q_abs.maxCoeff() / q_abs.minCoeff() : kNaN;
    }

    FeatureVector fv;
    fv.push("ela_meta.lin_simple.adj_r2", lf.adj_r2);
    fv.push("ela_meta.lin_simple.coef.min", cmin);
    fv.push("ela_meta.lin_simple.coef.max", cmax);
    fv.push("ela_meta.lin_simple.coef.max_by_min", cmin > 0.0 ? cmax / cmin : kNaN);
    fv.push("ela_meta.quad_simple.adj_r2", quad_r2);
    fv.push("ela_meta.quad_simple.cond", quad_cond);
    fv.push("ela_meta.rank_deficient", rank_deficient ? 1.0 : 0.0);
    fv.cost_evals = design.evals_consumed;
    return fv;
}

}  // namespace ela::features
