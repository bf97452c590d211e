#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace ela::sampling {

/// Axis-aligned box [lower, upper] in R^d.
class BoxDomain {
public:
    /// Throws InvalidArgument unless dim > 0 and lower[k] < upper[k] for all k.
    BoxDomain(Eigen::VectorXd lower, Eigen::VectorXd upper);

    /// [lo, hi]^dim; the default [-5, 5]^dim is the BBOB search space.
    static BoxDomain cube(int dim, double lo = -5.0, double hi = 5.0);

    int dim() const noexcept { return static_cast<int>(lower_.size()); }
    const Eigen::VectorXd& lower() const noexcept { return lower_; }
    const Eigen::VectorXd& upper() const noexcept { return upper_; }
    Eigen::VectorXd width() const { return upper_ - lower_; }

    bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    /// The same box translated by `offset`.
    BoxDomain shifted(const Eigen::VectorXd& offset) const;

    friend bool operator==(const BoxDomain& a, const BoxDomain& b) {
        return a.lower_ == b.lower_ && a.upper_ == b.upper_;
    }

private:
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
};

/// n points (rows of `points`) in a box, optionally with objective values.
struct SampleDesign {
    Eigen::MatrixXd points;
    std::optional<Eigen::VectorXd> values;
    BoxDomain domain;
    std::int64_t evals_consumed = 0;

    Eigen::Index size() const noexcept { return points.rows(); }
    int dim() const noexcept { return static_cast<int>(points.cols()); }
    bool evaluated() const noexcept { return values.has_value(); }

    /// Values, throwing InvalidArgument when they were never attached.
    const Eigen::VectorXd& y() const;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

inline constexpr int kDefaultImproveIterations = 1000;

/// Seeded random Latin hypercube: each column is an independent random
/// permutation of the n strata, jittered uniformly inside each stratum.
SampleDesign plain_lhd(Eigen::Index n, const BoxDomain& domain, std::uint64_t seed);

/// `plain_lhd` followed by `iterations` random swaps of two entries within a
/// random column; a swap is kept iff it strictly increases the minimum
/// pairwise Euclidean distance (maximin criterion). Keeps the Latin property.
SampleDesign improved_lhd(Eigen::Index n, const BoxDomain& domain, std::uint64_t seed,
                          int iterations = kDefaultImproveIterations);

/// Smallest Euclidean distance between two distinct rows.
double min_pairwise_distance(const Eigen::MatrixXd& points);

/// Attaches f(x_i) to every point. Throws EvaluationError for a non-finite
/// value and InvalidArgument when values are already attached.
SampleDesign evaluate_design(SampleDesign design, const Objective& f);

/// Header `x1,...,xd[,y]`; `y` only when values are attached.
std::string design_to_csv(const SampleDesign& design);

/// Parses a design CSV. The domain is not stored in the file and must be given.
SampleDesign design_from_csv(const std::string& text, const BoxDomain& domain);

}  // namespace ela::sampling
