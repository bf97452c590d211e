#include <array>
#include <numbers>

#include "ela/features.hpp"
#include "ela/rng.hpp"
#include "stats.hpp"

namespace ela::features {

namespace {

constexpr double kRidge = 1e-8;
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

/// Gaussian density with a Cholesky-factored covariance. A singular or
/// badly conditioned covariance gets `kRidge * I` added (growing tenfold
/// until the factorisation succeeds) and raises `degenerate`.
struct Gaussian {
    Eigen::VectorXd mean;
    Eigen::LLT<Eigen::MatrixXd> chol;
    double log_det = 0.0;

    Gaussian(Eigen::VectorXd mu, Eigen::MatrixXd cov, bool& degenerate) : mean(std::move(mu)) {
        const Eigen::Index d = cov.rows();
        double ridge = kRidge;
        for (int attempt = 0;; ++attempt) {
            chol.compute(cov);
            bool ok = chol.info() == Eigen::Success;
            if (ok) {
                const Eigen::VectorXd diag = chol.matrixL().toDenseMatrix().diagonal();
                ok = diag.minCoeff() > 0.0 && diag.minCoeff() * diag.minCoeff() > 1e-12 * diag.maxCoeff() * diag.maxCoeff();
            }
            if (ok || attempt > 12) break;
            degenerate = true;
            cov += ridge * Eigen::MatrixXd::Identity(d, d);
            ridge *= 10.0;
        }
        const Eigen::MatrixXd l = chol.matrixL();
        log_det = 2.0 * l.diagonal().array().log().sum();
    }

    double log_density(const Eigen::VectorXd& x) const {
        const Eigen::VectorXd z = chol.matrixL().solve(x - mean);
        return -0.5 * (z.squaredNorm() + log_det + static_cast<double>(x.size()) * kLog2Pi);
    }
};

double log_sum_exp(const Eigen::VectorXd& v) {
    const double m = v.maxCoeff();
    if (!std::isfinite(m)) return m;
    return m + std::log((v.array() - m).exp().sum());
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(idx[i]);
    return out;
}

Eigen::MatrixXd scatter(const Eigen::MatrixXd& x, const Eigen::VectorXd& mu) {
    const Eigen::MatrixXd c = x.rowwise() - mu.transpose();
    return c.transpose() * c;
}

enum class Kind { lda, qda, mda };

/// Class-conditional Gaussian discriminant for two classes.
class Discriminant {
public:
    Discriminant(Kind kind, const Eigen::MatrixXd& x, const std::vector<int>& labels, const FeatureConfig& cfg,
                 std::uint64_t seed, bool& degenerate) {
        const Eigen::Index d = x.cols();
        const auto n = static_cast<double>(x.rows());
        std::array<std::vector<Eigen::Index>, 2> members;
        for (Eigen::Index i = 0; i < x.rows(); ++i) members[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(i);

        Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(d, d);
        std::array<Eigen::VectorXd, 2> means;
        for (int c = 0; c < 2; ++c) {
            const auto& m = members[static_cast<std::size_t>(c)];
            log_prior_[static_cast<std::size_t>(c)] = m.empty() ? -kInf : std::log(static_cast<double>(m.size()) / n);
            if (m.empty()) continue;
            const Eigen::MatrixXd xc = rows_of(x, m);
            means[static_cast<std::size_t>(c)] = xc.colwise().mean().transpose();
            pooled += scatter(xc, means[static_cast<std::size_t>(c)]);
        }
        for (int c = 0; c < 2; ++c) {
            const auto& m = members[static_cast<std::size_t>(c)];
            auto& comps = components_[static_cast<std::size_t>(c)];
            if (m.empty()) continue;
            const Eigen::MatrixXd xc = rows_of(x, m);
            const auto nc = static_cast<double>(m.size());
            switch (kind) {
                case Kind::lda:
                    comps.emplace_back(0.0, Gaussian(means[static_cast<std::size_t>(c)],
                                                     pooled / std::max(1.0, n - 2.0), degenerate));
                    break;
                case Kind::qda:
                    comps.emplace_back(0.0, Gaussian(means[static_cast<std::size_t>(c)],
                                                     scatter(xc, means[static_cast<std::size_t>(c)]) / std::max(1.0, nc - 1.0),
                                                     degenerate));
                    break;
                case Kind::mda:
                    fit_mixture(xc, cfg, derive_seed(seed, {static_cast<std::uint64_t>(c)}), comps, degenerate);
                    break;
            }
        }
    }

    int predict(const Eigen::VectorXd& x) const {
        std::array<double, 2> score{};
        for (std::size_t c = 0; c < 2; ++c) {
            const auto& comps = components_[c];
            if (comps.empty()) {
                score[c] = -kInf;
                continue;
            }
            Eigen::VectorXd parts(static_cast<Eigen::Index>(comps.size()));
            for (std::size_t k = 0; k < comps.size(); ++k)
                parts[static_cast<Eigen::Index>(k)] = comps[k].first + comps[k].second.log_density(x);
            score[c] = log_prior_[c] + log_sum_exp(parts);
        }
        return score[1] > score[0] ? 1 : 0;
    }

private:
    using Component = std::pair<double, Gaussian>;  // (log weight, density)

    // EM for a Gaussian mixture, k-means++ seeding followed by hard assignment
    // to the nearest seed as the initial responsibilities.
    static void fit_mixture(const Eigen::MatrixXd& x, const FeatureConfig& cfg, std::uint64_t seed,
                            std::vector<Component>& out, bool& degenerate) {
        const Eigen::Index n = x.rows();
        const Eigen::Index k = std::max<Eigen::Index>(1, std::min<Eigen::Index>(cfg.mda_components, n / 2));
        Rng rng(seed);

        std::vector<Eigen::Index> centers{static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)))};
        while (static_cast<Eigen::Index>(centers.size()) < k) {
            Eigen::VectorXd d2(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                double best = kInf;
                for (auto c : centers) best = std::min(best, (x.row(i) - x.row(c)).squaredNorm());
                d2[i] = best;
            }
            const double total = d2.sum();
            if (!(total > 0.0)) break;
            double target = rng.uniform() * total;
            Eigen::Index pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                target -= d2[i];
                if (target < 0.0) {
                    pick = i;
                    break;
                }
            }
            centers.push_back(pick);
        }
        const auto kk = static_cast<Eigen::Index>(centers.size());
        Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(n, kk);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index arg = 0;
            double best = kInf;
            for (Eigen::Index c = 0; c < kk; ++c) {
                const double dist = (x.row(i) - x.row(centers[static_cast<std::size_t>(c)])).squaredNorm();
                if (dist < best) best = dist, arg = c;
            }
            resp(i, arg) = 1.0;
        }

        std::vector<Component> comps;
        for (int iter = 0; iter <= cfg.mda_em_iterations; ++iter) {
            // M step
            comps.clear();
            for (Eigen::Index c = 0; c < kk; ++c) {
                const double nk = resp.col(c).sum();
                if (nk <= 1e-10) continue;
                const Eigen::VectorXd mu = (x.transpose() * resp.col(c)) / nk;
                const Eigen::MatrixXd centred = x.rowwise() - mu.transpose();
                const Eigen::MatrixXd cov =
                    (centred.transpose() * resp.col(c).asDiagonal() * centred) / nk;
                comps.emplace_back(std::log(nk / static_cast<double>(n)), Gaussian(mu, cov, degenerate));
            }
            if (iter == cfg.mda_em_iterations) break;
            // E step
            resp = Eigen::MatrixXd::Zero(n, kk);
            Eigen::VectorXd parts(static_cast<Eigen::Index>(comps.size()));
            for (Eigen::Index i = 0; i < n; ++i) {
                const Eigen::VectorXd xi = x.row(i).transpose();
                for (std::size_t c = 0; c < comps.size(); ++c)
                    parts[static_cast<Eigen::Index>(c)] = comps[c].first + comps[c].second.log_density(xi);
                const double lse = log_sum_exp(parts);
                for (std::size_t c = 0; c < comps.size(); ++c)
                    resp(i, static_cast<Eigen::Index>(c)) = std::exp(parts[static_cast<Eigen::Index>(c)] - lse);
            }
        }
        out = std::move(comps);
    }

    std::array<double, 2> log_prior_{};
    std::array<std::vector<Component>, 2> components_;
};

double error_ratio(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return kNaN;
    if (a == 0.0 && b == 0.0) return 1.0;
    if (b == 0.0) return kNaN;
    return a / b;
}

}  // namespace

FeatureVector ela_levelset(const sampling::SampleDesign& design, const FeatureConfig& cfg) {
    detail::require_size(design, 20, "ela_level");
    const Eigen::MatrixXd& x = design.points;
    const auto y = detail::to_vector(design.y());
    const Eigen::Index n = design.size();
    const int folds = std::max(2, cfg.levelset_folds);

    FeatureVector fv;
    bool degenerate = false;
    for (std::size_t qi = 0; qi < cfg.levelset_quantiles.size(); ++qi) {
        const double q = cfg.levelset_quantiles[qi];
        const std::string tag = detail::quantile_tag(q);
        const double threshold = detail::quantile(y, q);
        std::vector<int> labels(static_cast<std::size_t>(n));
        std::array<std::vector<Eigen::Index>, 2> by_class;
        for (Eigen::Index i = 0; i < n; ++i) {
            labels[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] <= threshold ? 1 : 0;
            by_class[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(i);
        }

        std::array<double, 3> mmce{kNaN, kNaN, kNaN};
        if (by_class[0].size() >= 2 && by_class[1].size() >= 2) {
            // Stratified fold assignment: shuffle each class, deal round-robin.
            std::vector<int> fold_of(static_cast<std::size_t>(n));
            Rng rng(derive_seed(cfg.seed, {0x1e7e1, qi}));
            int next = 0;
            for (auto& members : by_class) {
                auto shuffled = members;
                rng.shuffle(std::span(shuffled));
                for (auto i : shuffled) fold_of[static_cast<std::size_t>(i)] = next++ % folds;
            }
            for (int kind = 0; kind < 3; ++kind) {
                double err_sum = 0.0;
                int used = 0;
                for (int f = 0; f < folds; ++f) {
                    std::vector<Eigen::Index> train, test;
                    for (Eigen::Index i = 0; i < n; ++i) (fold_of[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);
                    if (test.empty()) continue;
                    std::vector<int> train_labels;
                    for (auto i : train) train_labels.push_back(labels[static_cast<std::size_t>(i)]);
                    Discriminant model(static_cast<Kind>(kind), rows_of(x, train), train_labels, cfg,
                                       derive_seed(cfg.seed, {0x3da, qi, static_cast<std::uint64_t>(f)}), degenerate);
                    int wrong = 0;
                    for (auto i : test)
                        if (model.predict(x.row(i).transpose()) != labels[static_cast<std::size_t>(i)]) ++wrong;
                    err_sum += static_cast<double>(wrong) / static_cast<double>(test.size());
                    ++used;
                }
                mmce[static_cast<std::size_t>(kind)] = err_sum / used;
            }
        }
        fv.push("ela_level.mmce_lda_" + tag, mmce[0]);
        fv.push("ela_level.mmce_qda_" + tag, mmce[1]);
        fv.push("ela_level.mmce_mda_" + tag, mmce[2]);
        fv.push("ela_level.lda_qda_" + tag, error_ratio(mmce[0], mmce[1]));
        fv.push("ela_level.lda_mda_" + tag, error_ratio(mmce[0], mmce[2]));
        fv.push("ela_level.qda_mda_" + tag, error_ratio(mmce[1], mmce[2]));
    }
    fv.push("ela_level.degenerate", degenerate ? 1.0 : 0.0);
    fv.cost_evals = design.evals_consumed;
    return fv;
}

}  // namespace ela::features
