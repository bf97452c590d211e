#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <gtest/gtest.h>

#include "ela/common.hpp"
#include "ela/learners.hpp"
#include "ela/rng.hpp"

using namespace ela;
using namespace ela::learn;

namespace {

Eigen::MatrixXd random_x(int n, int p, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd x(n, p);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < p; ++c) x(i, c) = rng.uniform(-1.0, 1.0);
    return x;
}

// Brute-force kNN classifier: z-score with sample sd, stable sort by
// squared distance, plurality vote, ties to the nearest tied class.
int oracle_knn(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& q, int k) {
    const auto n = x.rows(), p = x.cols();
    Eigen::VectorXd mean = x.colwise().mean(), sd(p);
    for (Eigen::Index c = 0; c < p; ++c) {
        double ss = 0;
        for (Eigen::Index i = 0; i < n; ++i) ss += (x(i, c) - mean[c]) * (x(i, c) - mean[c]);
        sd[c] = ss > 0 ? std::sqrt(ss / static_cast<double>(n - 1)) : 1.0;
    }
    std::vector<std::pair<double, Eigen::Index>> d;
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = 0;
        for (Eigen::Index c = 0; c < p; ++c) s += std::pow((x(i, c) - q[c]) / sd[c], 2);
        d.push_back({s, i});
    }
    std::stable_sort(d.begin(), d.end(), [](auto a, auto b) { return a.first < b.first; });
    std::map<int, int> votes;
    for (int i = 0; i < k; ++i) ++votes[static_cast<int>(y[d[static_cast<std::size_t>(i)].second])];
    int top = 0;
    for (auto [c, v] : votes) top = std::max(top, v);
    for (int i = 0; i < k; ++i) {
        const int c = static_cast<int>(y[d[static_cast<std::size_t>(i)].second]);
        if (votes[c] == top) return c;
    }
    return -1;
}

void expect_same_predictions(const Model& a, const Model& b, const Eigen::MatrixXd& queries) {
    for (Eigen::Index i = 0; i < queries.rows(); ++i) EXPECT_EQ(a.predict(queries.row(i).transpose()), b.predict(queries.row(i).transpose()));
}

}  // namespace

TEST(Registry, KnownIds) {
    EXPECT_EQ(learner_ids(), (std::vector<std::string>{"cart", "rf", "knn"}));
    for (const auto& id : learner_ids()) EXPECT_EQ(make_learner(id)->id(), id);
    EXPECT_THROW(make_learner("svm"), InvalidArgument);
}

TEST(Cart, SeparatesAtMidpoint) {
    const int n = 60;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    Rng rng(4);
    double lo = -1e9, hi = 1e9;
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform(-1, 1);
        x(i, 1) = rng.uniform(-1, 1);
        y[i] = x(i, 0) > 0.37 ? 1.0 : 0.0;
        if (y[i] == 0) lo = std::max(lo, x(i, 0));
        else hi = std::min(hi, x(i, 0));
    }
    const auto m = DecisionTree().fit({x, y, Task::classification, 2}, 1);
    for (int i = 0; i < n; ++i) EXPECT_EQ(m->predict(x.row(i).transpose()), y[i]);
    const double mid = 0.5 * (lo + hi);
    EXPECT_EQ(m->predict(Eigen::Vector2d(mid - 1e-9, 0.0)), 0.0);
    EXPECT_EQ(m->predict(Eigen::Vector2d(mid + 1e-9, 0.0)), 1.0);
}

TEST(Cart, RegressionRootSplitMatchesBruteForce) {
    // 25 rows: the root may split, its children (< 20 rows) may not.
    const int n = 25;
    Eigen::MatrixXd x(n, 1);
    Eigen::VectorXd y(n);
    Rng rng(6);
    std::vector<double> xs(n);
    for (auto& v : xs) v = rng.uniform(0, 10);
    std::sort(xs.begin(), xs.end());
    for (int i = 0; i < n; ++i) x(i, 0) = xs[static_cast<std::size_t>(i)], y[i] = std::sin(xs[static_cast<std::size_t>(i)]) + xs[static_cast<std::size_t>(i)];
    double best = 1e300;
    int cut = -1;
    auto sse = [&](int a, int b) {
        double m = 0;
        for (int i = a; i < b; ++i) m += y[i] / (b - a);
        double s = 0;
        for (int i = a; i < b; ++i) s += (y[i] - m) * (y[i] - m);
        return std::pair{s, m};
    };
    for (int k = 7; k <= n - 7; ++k) {
        const double s = sse(0, k).first + sse(k, n).first;
        if (s < best) best = s, cut = k;
    }
    const double left = sse(0, cut).second, right = sse(cut, n).second;
    const auto m = DecisionTree().fit({x, y, Task::regression, 0}, 1);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(m->predict(x.row(i).transpose()), i < cut ? left : right, 1e-12) << i;
}

TEST(Cart, TooFewRowsGiveSingleLeaf) {
    const auto x = random_x(15, 3, 2);
    Eigen::VectorXd y = x.col(0);
    const auto m = DecisionTree().fit({x, y, Task::regression, 0}, 1);
    for (Eigen::Index i = 0; i < x.rows(); ++i) EXPECT_NEAR(m->predict(x.row(i).transpose()), y.mean(), 1e-12);
}

TEST(Cart, DegenerateTargetsFallBackToConstant) {
    const auto x = random_x(30, 2, 3);
    const Eigen::VectorXd cls = Eigen::VectorXd::Constant(30, 2.0);
    const auto m = DecisionTree().fit({x, cls, Task::classification, 3}, 1);
    EXPECT_NE(dynamic_cast<const ConstantModel*>(m.get()), nullptr);
    EXPECT_EQ(m->predict(Eigen::Vector2d(0.3, 0.1)), 2.0);
    const Eigen::VectorXd reg = Eigen::VectorXd::Constant(30, 1.5);
    for (const auto& id : learner_ids()) {
        const auto r = make_learner(id)->fit({x, reg, Task::regression, 0}, 1);
        EXPECT_NE(dynamic_cast<const ConstantModel*>(r.get()), nullptr) << id;
        EXPECT_EQ(r->predict(Eigen::Vector2d(0.0, 0.0)), 1.5);
    }
}

TEST(Learners, RejectInvalidTrainingSets) {
    const auto x = random_x(10, 2, 3);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(10);
    Eigen::VectorXd short_y = Eigen::VectorXd::Zero(9);
    Eigen::MatrixXd bad = x;
    bad(3, 1) = kNaN;
    Eigen::VectorXd out_of_range = y;
    out_of_range[2] = 5;
    for (const auto& id : learner_ids()) {
        const auto l = make_learner(id);
        EXPECT_THROW(l->fit({x, short_y, Task::regression, 0}, 1), InvalidArgument) << id;
        EXPECT_THROW(l->fit({bad, y, Task::regression, 0}, 1), InvalidArgument) << id;
        EXPECT_THROW(l->fit({x, out_of_range, Task::classification, 2}, 1), InvalidArgument) << id;
    }
}

TEST(RandomForest, DefaultMtry) {
    EXPECT_EQ(RandomForest::default_mtry(Task::classification, 102), 10);
    EXPECT_EQ(RandomForest::default_mtry(Task::regression, 102), 34);
    EXPECT_EQ(RandomForest::default_mtry(Task::classification, 2), 1);
    EXPECT_EQ(RandomForest::default_mtry(Task::regression, 2), 1);
}

TEST(RandomForest, FitsSeparableDataAndIsDeterministic) {
    const auto x = random_x(80, 4, 8);
    Eigen::VectorXd y(80);
    for (int i = 0; i < 80; ++i) y[i] = x(i, 1) > 0 ? 1.0 : 0.0;
    const RandomForest rf(100);
    const auto a = rf.fit({x, y, Task::classification, 2}, 7);
    const auto b = rf.fit({x, y, Task::classification, 2}, 7);
    EXPECT_EQ(a->to_json(), b->to_json());
    int correct = 0;
    for (int i = 0; i < 80; ++i) correct += a->predict(x.row(i).transpose()) == y[i];
    EXPECT_EQ(correct, 80);
    const auto c = rf.fit({x, y, Task::classification, 2}, 8);
    EXPECT_NE(a->to_json(), c->to_json());
    EXPECT_EQ(a->to_json().at("trees").size(), 100u);
}

TEST(RandomForest, RegressionTracksSmoothTarget) {
    const auto x = random_x(200, 2, 9);
    Eigen::VectorXd y = 3.0 * x.col(0);
    const auto m = RandomForest(200).fit({x, y, Task::regression, 0}, 1);
    const auto q = random_x(50, 2, 10);
    double err = 0;
    for (Eigen::Index i = 0; i < q.rows(); ++i) err += std::abs(m->predict(q.row(i).transpose()) - 3.0 * q(i, 0));
    EXPECT_LT(err / 50.0, 0.3);
}

TEST(Knn, MatchesBruteForceOracle) {
    Eigen::MatrixXd x = random_x(40, 3, 11);
    x.col(2) *= 50.0;
    Eigen::VectorXd y(40);
    Rng rng(12);
    for (int i = 0; i < 40; ++i) y[i] = static_cast<double>(rng.below(3));
    const auto m = Knn(5).fit({x, y, Task::classification, 3}, 1);
    const auto q = random_x(200, 3, 13);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        Eigen::VectorXd row = q.row(i).transpose();
        row[2] *= 50.0;
        EXPECT_EQ(static_cast<int>(m->predict(row)), oracle_knn(x, y, row, 5)) << i;
    }
}

TEST(Knn, ZeroVarianceColumnIsHarmless) {
    Eigen::MatrixXd x = random_x(20, 2, 14);
    x.col(1).setConstant(4.0);
    Eigen::VectorXd y(20);
    for (int i = 0; i < 20; ++i) y[i] = x(i, 0) > 0 ? 1 : 0;
    const auto m = Knn(1).fit({x, y, Task::classification, 2}, 1);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(m->predict(x.row(i).transpose()), y[i]);
}

TEST(Knn, RegressionAveragesNeighbours) {
    Eigen::MatrixXd x(6, 1);
    x << 0, 1, 2, 3, 4, 10;
    Eigen::VectorXd y(6);
    y << 1, 2, 3, 4, 5, 100;
    const auto m = Knn(3).fit({x, y, Task::regression, 0}, 1);
    EXPECT_DOUBLE_EQ(m->predict(Eigen::VectorXd::Constant(1, 0.9)), 2.0);
}

TEST(Serialization, RoundTripPredictsIdentically) {
    const auto x = random_x(60, 3, 15);
    Eigen::VectorXd cls(60), reg(60);
    for (int i = 0; i < 60; ++i) cls[i] = x(i, 0) + x(i, 2) > 0 ? 1 : (x(i, 1) > 0.5 ? 2 : 0), reg[i] = x(i, 0) * x(i, 1);
    const auto q = random_x(40, 3, 16);
    for (const auto& id : learner_ids()) {
        const auto l = id == "rf" ? std::unique_ptr<Learner>(new RandomForest(25)) : make_learner(id);
        for (bool classify : {true, false}) {
            const TrainingSet t{x, classify ? cls : reg, classify ? Task::classification : Task::regression, classify ? 3 : 0};
            const auto m = l->fit(t, 3);
            const auto back = model_from_json(nlohmann::json::parse(m->to_json().dump()));
            expect_same_predictions(*m, *back, q);
        }
    }
    EXPECT_EQ(model_from_json(ConstantModel(4).to_json())->predict(Eigen::Vector3d::Zero()), 4.0);
    EXPECT_THROW(model_from_json({{"type", "svm"}}), InvalidArgument);
}
