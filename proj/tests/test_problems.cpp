#include <cmath>
#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "ela/common.hpp"
#include "ela/problems.hpp"
#include "ela/rng.hpp"

using namespace ela;
using namespace ela::problems;

TEST(Problems, BaseSphereIsZeroAtOrigin) {
    const auto p = make_instance(1, 2, 0);
    EXPECT_EQ(p(Eigen::Vector2d::Zero()), 0.0);
    EXPECT_EQ(p.y_opt(), 0.0);
}

TEST(Problems, LinearSlopeOptimumOnCorner) {
    const auto p = make_instance(5, 3, 0);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(std::abs(p.x_opt()[k]), 5.0);
    // No interior point beats the corner.
    for (double t : {-4.0, 0.0, 4.9}) EXPECT_GT(p(Eigen::Vector3d::Constant(t)), p.y_opt());
}

TEST(Problems, DifferentInstancesShareTheOptimumRelation) {
    const auto a = make_instance(3, 2, 2);
    const auto b = make_instance(3, 2, 3);
    EXPECT_NE(a.x_opt(), b.x_opt());
    EXPECT_NEAR(a(a.x_opt()), a.y_opt(), 1e-12);
    EXPECT_NEAR(b(b.x_opt()), b.y_opt(), 1e-12);
}

TEST(Problems, EveryInstanceAttainsItsOptimum) {
    const auto all = suite({2, 3, 5, 10}, implemented_fids(), {1, 2, 3, 4, 5});
    ASSERT_EQ(all.size(), 200u);
    for (const auto& p : all) {
        EXPECT_NEAR(p(p.x_opt()), p.y_opt(), 1e-12 * std::max(1.0, std::abs(p.y_opt())))
            << p.id().fid << " " << p.id().dim << " " << p.id().iid;
        const auto& r = p.rotation();
        EXPECT_LT((r.transpose() * r - Eigen::MatrixXd::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_TRUE(p.domain().contains(p.x_opt()));
    }
}

TEST(Problems, OptimumIsMinimalOnRandomProbes) {
    for (int fid : implemented_fids()) {
        const auto p = make_instance(fid, 3, 1);
        Rng rng(static_cast<std::uint64_t>(fid));
        for (int i = 0; i < 200; ++i) {
            Eigen::Vector3d x;
            for (int k = 0; k < 3; ++k) x[k] = rng.uniform(-5, 5);
            EXPECT_GE(p(x), p.y_opt() - 1e-9) << "fid " << fid;
        }
    }
}

TEST(Problems, SuiteOrderAndCounts) {
    EXPECT_EQ(suite({2}, {1}, {1, 2, 3, 4, 5}).size(), 5u);
    const auto s = suite({3, 2}, {4, 1}, {2, 1});
    ASSERT_EQ(s.size(), 8u);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1].id(), s[i].id());
    EXPECT_EQ(s.front().id(), (ProblemId{1, 2, 1}));
}

TEST(Problems, Errors) {
    EXPECT_THROW(make_instance(2, 2, 1), UnsupportedFunction);
    EXPECT_THROW(function_name(99), UnsupportedFunction);
    EXPECT_THROW(make_instance(1, 1, 1), InvalidArgument);
    EXPECT_THROW(make_instance(1, 2, -1), InvalidArgument);
}

TEST(Problems, DeterministicInstances) {
    const auto a = make_instance(17, 5, 4);
    const auto b = make_instance(17, 5, 4);
    EXPECT_EQ(a.x_opt(), b.x_opt());
    EXPECT_EQ(a.rotation(), b.rotation());
    EXPECT_EQ(a.y_opt(), b.y_opt());
}

TEST(Problems, ManifestCsv) {
    const auto text = manifest_csv(suite({2}, {1, 3}, {1}));
    EXPECT_EQ(text.substr(0, text.find('\n')), "fid,dim,iid,y_opt");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}
