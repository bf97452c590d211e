#include <algorithm>
#include <cmath>

#include "tree.hpp"

namespace ela::learn {

namespace {

class ForestModel final : public Model {
public:
    ForestModel(std::vector<detail::Tree> trees, Task task, int n_classes)
        : trees_(std::move(trees)), task_(task), n_classes_(n_classes) {}

    double predict(const Eigen::VectorXd& x) const override {
        if (task_ == Task::regression) {
            double s = 0.0;
            for (const auto& t : trees_) s += t.predict(x);
            return s / static_cast<double>(trees_.size());
        }
        std::vector<double> votes(static_cast<std::size_t>(n_classes_), 0.0);
        for (const auto& t : trees_) votes[static_cast<std::size_t>(t.predict(x))] += 1.0;
        return detail::majority(votes);
    }

    nlohmann::json to_json() const override {
        auto trees = nlohmann::json::array();
        for (const auto& t : trees_) trees.push_back(t.to_json());
        return {{"type", "rf"},
                {"task", task_ == Task::classification ? "classification" : "regression"},
                {"n_classes", n_classes_},
                {"trees", std::move(trees)}};
    }

private:
    std::vector<detail::Tree> trees_;
    Task task_;
    int n_classes_;
};

}  // namespace

std::unique_ptr<Model> detail::forest_model_from_json(const nlohmann::json& j) {
    const Task task = j.at("task") == "classification" ? Task::classification : Task::regression;
    std::vector<Tree> trees;
    for (const auto& t : j.at("trees")) trees.push_back(Tree::from_json(t));
    if (trees.empty()) throw InvalidArgument("forest without trees");
    return std::make_unique<ForestModel>(std::move(trees), task, j.at("n_classes").get<int>());
}

int RandomForest::default_mtry(Task task, int p) {
    if (task == Task::classification) return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(p)))));
    return std::max(p / 3, 1);
}

std::unique_ptr<Model> RandomForest::fit(const TrainingSet& data, std::uint64_t seed) const {
    detail::check_training_set(data);
    if (n_trees_ < 1) throw InvalidArgument("random forest needs at least one tree");
    if (auto c = detail::constant_fallback(data)) return c;
    const int n = static_cast<int>(data.x.rows());
    TreeParams params;
    params.cp = 0.0;
    params.max_depth = 1000;
    params.min_bucket = 1;
    params.min_split = data.task == Task::classification ? 2 : 6;
    params.mtry = default_mtry(data.task, static_cast<int>(data.x.cols()));

    std::vector<detail::Tree> trees;
    trees.reserve(static_cast<std::size_t>(n_trees_));
    for (int t = 0; t < n_trees_; ++t) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
        std::vector<int> rows(static_cast<std::size_t>(n));
        for (auto& r : rows) r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        std::sort(rows.begin(), rows.end());
        trees.push_back(detail::grow_tree(data, std::move(rows), params, rng));
    }
    return std::make_unique<ForestModel>(std::move(trees), data.task, data.n_classes);
}

}  // namespace ela::learn
