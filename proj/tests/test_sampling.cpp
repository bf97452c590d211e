#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "ela/common.hpp"
#include "ela/sampling.hpp"

using namespace ela;
using namespace ela::sampling;

namespace {

// Brute-force minimum distance, independent of the library routine.
double brute_min_distance(const Eigen::MatrixXd& p) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = i + 1; j < p.rows(); ++j) {
            double s = 0;
            for (Eigen::Index k = 0; k < p.cols(); ++k) s += (p(i, k) - p(j, k)) * (p(i, k) - p(j, k));
            best = std::min(best, std::sqrt(s));
        }
    return best;
}

void expect_latin(const SampleDesign& d) {
    const auto n = d.size();
    for (int k = 0; k < d.dim(); ++k) {
        std::vector<int> count(static_cast<std::size_t>(n), 0);
        const double lo = d.domain.lower()[k], w = d.domain.upper()[k] - lo;
        for (Eigen::Index i = 0; i < n; ++i) {
            auto bin = static_cast<Eigen::Index>(std::floor((d.points(i, k) - lo) / w * static_cast<double>(n)));
            bin = std::min(bin, n - 1);
            ++count[static_cast<std::size_t>(bin)];
        }
        for (int c : count) EXPECT_EQ(c, 1);
    }
}

}  // namespace

TEST(BoxDomain, RejectsDegenerateBounds) {
    EXPECT_THROW(BoxDomain(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)), InvalidArgument);
    EXPECT_THROW(BoxDomain(Eigen::VectorXd(0), Eigen::VectorXd(0)), InvalidArgument);
    const auto c = BoxDomain::cube(3);
    EXPECT_EQ(c.lower(), Eigen::Vector3d::Constant(-5));
    EXPECT_EQ(c.upper(), Eigen::Vector3d::Constant(5));
}

TEST(ImprovedLhd, OnePointPerBinIn1D) {
    const auto d = improved_lhd(4, BoxDomain::cube(1, 0.0, 1.0), 7);
    std::vector<double> x{d.points(0, 0), d.points(1, 0), d.points(2, 0), d.points(3, 0)};
    std::sort(x.begin(), x.end());
    EXPECT_LT(x[0], 0.25);
    EXPECT_GE(x[1], 0.25);
    EXPECT_LT(x[1], 0.5);
    EXPECT_GE(x[2], 0.5);
    EXPECT_LT(x[2], 0.75);
    EXPECT_GE(x[3], 0.75);
}

TEST(ImprovedLhd, LatinPropertyAndContainment) {
    for (int dim : {2, 3, 5}) {
        const auto d = improved_lhd(50 * dim, BoxDomain::cube(dim), 100 + static_cast<std::uint64_t>(dim));
        expect_latin(d);
        for (Eigen::Index i = 0; i < d.size(); ++i) EXPECT_TRUE(d.domain.contains(d.points.row(i).transpose()));
        EXPECT_EQ(d.evals_consumed, 50 * dim);
        EXPECT_FALSE(d.evaluated());
    }
}

TEST(ImprovedLhd, Deterministic) {
    const auto a = improved_lhd(100, BoxDomain::cube(2), 42);
    const auto b = improved_lhd(100, BoxDomain::cube(2), 42);
    EXPECT_EQ(a.points, b.points);
    const auto c = improved_lhd(100, BoxDomain::cube(2), 43);
    EXPECT_NE(a.points, c.points);
}

TEST(ImprovedLhd, NotWorseThanPlainLhs) {
    const auto dom = BoxDomain::cube(5);
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto plain = plain_lhd(250, dom, seed);
        const auto improved = improved_lhd(250, dom, seed);
        EXPECT_GE(brute_min_distance(improved.points), brute_min_distance(plain.points));
        EXPECT_DOUBLE_EQ(min_pairwise_distance(improved.points), brute_min_distance(improved.points));
        expect_latin(plain);
    }
}

TEST(ImprovedLhd, RejectsTinyDesigns) {
    EXPECT_THROW(improved_lhd(1, BoxDomain::cube(2), 1), InvalidArgument);
}

TEST(EvaluateDesign, AttachesValuesAndCountsEvaluations) {
    auto d = improved_lhd(10, BoxDomain::cube(2), 3);
    int calls = 0;
    d = evaluate_design(std::move(d), [&](const Eigen::VectorXd&) {
        ++calls;
        return 2.5;
    });
    EXPECT_EQ(calls, 10);
    EXPECT_EQ(d.evals_consumed, 10);
    for (Eigen::Index i = 0; i < 10; ++i) EXPECT_EQ(d.y()[i], 2.5);
    EXPECT_THROW(evaluate_design(d, [](const Eigen::VectorXd&) { return 0.0; }), InvalidArgument);
}

TEST(EvaluateDesign, SphereAtZeroIsZero) {
    SampleDesign d{Eigen::MatrixXd::Zero(2, 3), std::nullopt, BoxDomain::cube(3), 0};
    d = evaluate_design(std::move(d), [](const Eigen::VectorXd& x) { return x.squaredNorm(); });
    EXPECT_EQ(d.y()[0], 0.0);
}

TEST(EvaluateDesign, NonFiniteValueCarriesPointIndex) {
    auto d = improved_lhd(10, BoxDomain::cube(2), 3);
    int i = 0;
    try {
        evaluate_design(std::move(d), [&](const Eigen::VectorXd&) { return i++ == 6 ? kNaN : 1.0; });
        FAIL() << "expected EvaluationError";
    } catch (const EvaluationError& e) {
        EXPECT_EQ(e.point_index(), 6u);
    }
}

TEST(DesignCsv, RoundTrip) {
    auto d = improved_lhd(12, BoxDomain::cube(3), 9);
    const auto text0 = design_to_csv(d);
    EXPECT_EQ(text0.substr(0, text0.find('\n')), "x1,x2,x3");
    d = evaluate_design(std::move(d), [](const Eigen::VectorXd& x) { return x.sum(); });
    const auto text = design_to_csv(d);
    EXPECT_EQ(text.substr(0, text.find('\n')), "x1,x2,x3,y");
    const auto back = design_from_csv(text, BoxDomain::cube(3));
    EXPECT_EQ(back.points, d.points);
    EXPECT_EQ(back.y(), d.y());
}
