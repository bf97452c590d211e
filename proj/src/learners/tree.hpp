#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ela/learners.hpp"
#include "ela/rng.hpp"

namespace ela::learn::detail {

/// Flat binary tree; feature < 0 marks a leaf.
struct Tree {
    std::vector<int> feature;
    std::vector<double> threshold;
    std::vector<int> left;
    std::vector<int> right;
    std::vector<double> value;

    double predict(const Eigen::VectorXd& x) const;
    nlohmann::json to_json() const;
    static Tree from_json(const nlohmann::json& j);
};

/// Grows a tree on the rows listed in `rows` (repeats allowed, as in a
/// bootstrap sample). `rng` is only used when params.mtry subsamples features.
Tree grow_tree(const TrainingSet& data, std::vector<int> rows, const TreeParams& params, Rng& rng);

/// Majority class, ties to the lower index.
int majority(const std::vector<double>& counts);

/// ConstantModel when the targets are degenerate (one class present, or all
/// values equal), else null.
std::unique_ptr<Model> constant_fallback(const TrainingSet& data);

void check_training_set(const TrainingSet& data);

std::unique_ptr<Model> tree_model_from_json(const nlohmann::json& j);
std::unique_ptr<Model> forest_model_from_json(const nlohmann::json& j);
std::unique_ptr<Model> knn_model_from_json(const nlohmann::json& j);

}  // namespace ela::learn::detail
