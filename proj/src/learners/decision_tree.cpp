#include <algorithm>
#include <cmath>
#include <numeric>

#include "tree.hpp"

namespace ela::learn {

namespace detail {

double Tree::predict(const Eigen::VectorXd& x) const {
    int node = 0;
    while (feature[static_cast<std::size_t>(node)] >= 0) {
        const auto n = static_cast<std::size_t>(node);
        node = x[feature[n]] <= threshold[n] ? left[n] : right[n];
    }
    return value[static_cast<std::size_t>(node)];
}

nlohmann::json Tree::to_json() const {
    return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

Tree Tree::from_json(const nlohmann::json& j) {
    Tree t;
    j.at("feature").get_to(t.feature);
    j.at("threshold").get_to(t.threshold);
    j.at("left").get_to(t.left);
    j.at("right").get_to(t.right);
    j.at("value").get_to(t.value);
    const auto n = t.feature.size();
    if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n || t.value.size() != n)
        throw InvalidArgument("malformed tree");
    return t;
}

int majority(const std::vector<double>& counts) {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

namespace {

struct Builder {
    const TrainingSet& data;
    const TreeParams& params;
    Rng& rng;
    Tree tree;
    double root_impurity = 0.0;

    bool classification() const { return data.task == Task::classification; }

    // Impurity of a node: n * Gini for classification, SSE for regression.
    double impurity(const std::vector<int>& rows) const {
        const double n = static_cast<double>(rows.size());
        if (classification()) {
            std::vector<double> c(static_cast<std::size_t>(data.n_classes), 0.0);
            for (int r : rows) c[static_cast<std::size_t>(data.y[r])] += 1.0;
            double g = 1.0;
            for (double v : c) g -= (v / n) * (v / n);
            return n * g;
        }
        double s = 0.0;
        for (int r : rows) s += data.y[r];
        const double m = s / n;
        double sse = 0.0;
        for (int r : rows) sse += (data.y[r] - m) * (data.y[r] - m);
        return sse;
    }

    double leaf_value(const std::vector<int>& rows) const {
        if (classification()) {
            std::vector<double> c(static_cast<std::size_t>(data.n_classes), 0.0);
            for (int r : rows) c[static_cast<std::size_t>(data.y[r])] += 1.0;
            return majority(c);
        }
        double s = 0.0;
        for (int r : rows) s += data.y[r];
        return s / static_cast<double>(rows.size());
    }

    std::vector<int> candidate_features() {
        const int p = static_cast<int>(data.x.cols());
        std::vector<int> f(static_cast<std::size_t>(p));
        std::iota(f.begin(), f.end(), 0);
        if (params.mtry <= 0 || params.mtry >= p) return f;
        for (int i = 0; i < params.mtry; ++i) {
            const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(p - i));
            std::swap(f[static_cast<std::size_t>(i)], f[j]);
        }
        f.resize(static_cast<std::size_t>(params.mtry));
        return f;
    }

    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double children = kInf;
    };

    Split best_split(const std::vector<int>& rows) {
        Split best;
        const std::size_t n = rows.size();
        const auto min_bucket = static_cast<std::size_t>(std::max(params.min_bucket, 1));
        std::vector<int> order(rows);
        const std::size_t k = classification() ? static_cast<std::size_t>(data.n_classes) : 0;
        std::vector<double> lc(k), rc(k);
        for (int f : candidate_features()) {
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return data.x(a, f) < data.x(b, f); });
            if (data.x(order.front(), f) == data.x(order.back(), f)) continue;
            double ls = 0.0, lss = 0.0, rs = 0.0, rss = 0.0;
            if (classification()) {
                std::fill(lc.begin(), lc.end(), 0.0);
                std::fill(rc.begin(), rc.end(), 0.0);
                for (int r : order) rc[static_cast<std::size_t>(data.y[r])] += 1.0;
            } else {
                for (int r : order) rs += data.y[r], rss += data.y[r] * data.y[r];
            }
            for (std::size_t i = 1; i < n; ++i) {
                const int moved = order[i - 1];
                const double yv = data.y[moved];
                if (classification()) {
                    lc[static_cast<std::size_t>(yv)] += 1.0;
                    rc[static_cast<std::size_t>(yv)] -= 1.0;
                } else {
                    ls += yv, lss += yv * yv, rs -= yv, rss -= yv * yv;
                }
                if (i < min_bucket || n - i < min_bucket) continue;
                const double a = data.x(order[i - 1], f), b = data.x(order[i], f);
                if (a == b) continue;
                const double nl = static_cast<double>(i), nr = static_cast<double>(n - i);
                double children;
                if (classification()) {
                    double gl = 0.0, gr = 0.0;
                    for (std::size_t c = 0; c < k; ++c) gl += lc[c] * lc[c], gr += rc[c] * rc[c];
                    children = (nl - gl / nl) + (nr - gr / nr);
                } else {
                    children = std::max(0.0, lss - ls * ls / nl) + std::max(0.0, rss - rs * rs / nr);
                }
                if (children < best.children) {
                    double t = a / 2 + b / 2;
                    if (!(t >= a && t < b)) t = a;
                    best = {f, t, children};
                }
            }
        }
        return best;
    }

    int grow(const std::vector<int>& rows, int depth) {
        const int id = static_cast<int>(tree.feature.size());
        tree.feature.push_back(-1);
        tree.threshold.push_back(0.0);
        tree.left.push_back(-1);
        tree.right.push_back(-1);
        tree.value.push_back(leaf_value(rows));

        const double imp = impurity(rows);
        if (static_cast<int>(rows.size()) < params.min_split || depth >= params.max_depth || imp <= 1e-12 * (1.0 + root_impurity))
            return id;
        const Split s = best_split(rows);
        if (s.feature < 0) return id;
        const double gain = imp - s.children;
        if (!(gain > 1e-12 * (1.0 + imp)) || gain < params.cp * root_impurity) return id;

        std::vector<int> l, r;
        for (int row : rows) (data.x(row, s.feature) <= s.threshold ? l : r).push_back(row);
        const auto u = static_cast<std::size_t>(id);
        tree.feature[u] = s.feature;
        tree.threshold[u] = s.threshold;
        const int li = grow(l, depth + 1);
        tree.left[u] = li;
        const int ri = grow(r, depth + 1);
        tree.right[u] = ri;
        return id;
    }
};

}  // namespace

Tree grow_tree(const TrainingSet& data, std::vector<int> rows, const TreeParams& params, Rng& rng) {
    Builder b{data, params, rng, {}, 0.0};
    b.root_impurity = b.impurity(rows);
    b.grow(rows, 0);
    return std::move(b.tree);
}

}  // namespace detail

namespace {

class TreeModel final : public Model {
public:
    TreeModel(detail::Tree tree, Task task) : tree_(std::move(tree)), task_(task) {}
    double predict(const Eigen::VectorXd& x) const override { return tree_.predict(x); }
    nlohmann::json to_json() const override {
        return {{"type", "cart"}, {"task", task_ == Task::classification ? "classification" : "regression"},
                {"tree", tree_.to_json()}};
    }

private:
    detail::Tree tree_;
    Task task_;
};

}  // namespace

std::unique_ptr<Model> detail::tree_model_from_json(const nlohmann::json& j) {
    const Task task = j.at("task") == "classification" ? Task::classification : Task::regression;
    return std::make_unique<TreeModel>(Tree::from_json(j.at("tree")), task);
}

std::unique_ptr<Model> DecisionTree::fit(const TrainingSet& data, std::uint64_t seed) const {
    detail::check_training_set(data);
    if (auto c = detail::constant_fallback(data)) return c;
    std::vector<int> rows(static_cast<std::size_t>(data.x.rows()));
    std::iota(rows.begin(), rows.end(), 0);
    Rng rng(seed);
    return std::make_unique<TreeModel>(detail::grow_tree(data, std::move(rows), params_, rng), data.task);
}

}  // namespace ela::learn
