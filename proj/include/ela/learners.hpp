#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ela/common.hpp"

namespace ela::learn {

enum class Task { classification, regression };

/// A fitted model. Classification models return a class index in
/// [0, n_classes) encoded as a double; regression models return the value.
class Model {
public:
    virtual ~Model() = default;
    virtual double predict(const Eigen::VectorXd& x) const = 0;
    /// Complete state; model_from_json(to_json()) predicts identically.
    virtual nlohmann::json to_json() const = 0;
};

/// Predicts one value regardless of input. Used when the training targets
/// are degenerate (a single class, or constant values).
class ConstantModel final : public Model {
public:
    explicit ConstantModel(double value) : value_(value) {}
    double predict(const Eigen::VectorXd&) const override { return value_; }
    nlohmann::json to_json() const override;

private:
    double value_;
};

/// Training inputs. Rows of `x` are observations; `y` holds class indices
/// (classification) or targets (regression). `x` must be finite.
struct TrainingSet {
    const Eigen::MatrixXd& x;
    const Eigen::VectorXd& y;
    Task task = Task::classification;
    int n_classes = 0;  ///< classification only
};

class Learner {
public:
    virtual ~Learner() = default;
    virtual std::string id() const = 0;
    /// Fits a model. Degenerate targets yield a ConstantModel. All
    /// randomness is drawn from `seed`.
    virtual std::unique_ptr<Model> fit(const TrainingSet& data, std::uint64_t seed) const = 0;
};

/// CART with rpart's defaults: minsplit 20, minbucket 7, cp 0.01, maxdepth 30;
/// Gini for classification, squared error for regression. No pruning.
struct TreeParams {
    int min_split = 20;
    int min_bucket = 7;
    double cp = 0.01;
    int max_depth = 30;
    int mtry = 0;  ///< features tried per split; 0 = all
};

class DecisionTree final : public Learner {
public:
    explicit DecisionTree(TreeParams params = {}) : params_(params) {}
    std::string id() const override { return "cart"; }
    std::unique_ptr<Model> fit(const TrainingSet& data, std::uint64_t seed) const override;

private:
    TreeParams params_;
};

/// Breiman random forest: bootstrap samples, unpruned trees, mtry features
/// per split (floor(sqrt(p)) for classification, max(floor(p/3), 1) for
/// regression), terminal node size 1 (classification) or 5 (regression).
/// Majority vote (ties to the lower class) or mean.
class RandomForest final : public Learner {
public:
    explicit RandomForest(int n_trees = 500) : n_trees_(n_trees) {}
    std::string id() const override { return "rf"; }
    std::unique_ptr<Model> fit(const TrainingSet& data, std::uint64_t seed) const override;
    static int default_mtry(Task task, int p);

private:
    int n_trees_;
};

/// k-nearest neighbours on z-scored features (training mean and sd;
/// zero-sd columns are left unscaled). Distance ties go to the lower
/// training index; vote ties go to the class of the nearest tied neighbour.
class Knn final : public Learner {
public:
    explicit Knn(int k = 5) : k_(k) {}
    std::string id() const override { return "knn"; }
    std::unique_ptr<Model> fit(const TrainingSet& data, std::uint64_t seed) const override;

private:
    int k_;
};

/// Registry: "cart", "rf", "knn".
std::unique_ptr<Learner> make_learner(const std::string& id);
std::vector<std::string> learner_ids();

std::unique_ptr<Model> model_from_json(const nlohmann::json& j);

}  // namespace ela::learn
