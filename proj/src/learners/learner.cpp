#include <cmath>

#include "tree.hpp"

namespace ela::learn {

nlohmann::json ConstantModel::to_json() const { return {{"type", "constant"}, {"value", value_}}; }

void detail::check_training_set(const TrainingSet& data) {
    if (data.x.rows() == 0 || data.x.cols() == 0) throw InvalidArgument("empty training set");
    if (data.y.size() != data.x.rows()) throw InvalidArgument("target length does not match the number of rows");
    if (!data.x.allFinite()) throw InvalidArgument("training features must be finite");
    if (!data.y.allFinite()) throw InvalidArgument("training targets must be finite");
    if (data.task == Task::classification) {
        if (data.n_classes < 1) throw InvalidArgument("n_classes must be positive");
        for (Eigen::Index i = 0; i < data.y.size(); ++i)
            if (data.y[i] < 0 || data.y[i] >= data.n_classes || data.y[i] != std::floor(data.y[i]))
                throw InvalidArgument("class labels must be integers in [0, n_classes)");
    }
}

std::unique_ptr<Model> detail::constant_fallback(const TrainingSet& data) {
    if (data.y.minCoeff() != data.y.maxCoeff()) return nullptr;
    return std::make_unique<ConstantModel>(data.y[0]);
}

std::unique_ptr<Learner> make_learner(const std::string& id) {
    if (id == "cart") return std::make_unique<DecisionTree>();
    if (id == "rf") return std::make_unique<RandomForest>();
    if (id == "knn") return std::make_unique<Knn>();
    throw InvalidArgument("unknown learner '" + id + "' (known: cart, rf, knn)");
}

std::vector<std::string> learner_ids() { return {"cart", "rf", "knn"}; }

std::unique_ptr<Model> model_from_json(const nlohmann::json& j) {
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "constant") return std::make_unique<ConstantModel>(j.at("value").get<double>());
        if (type == "cart") return detail::tree_model_from_json(j);
        if (type == "rf") return detail::forest_model_from_json(j);
        if (type == "knn") return detail::knn_model_from_json(j);
        throw InvalidArgument("unknown model type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed model: ") + e.what());
    }
}

}  // namespace ela::learn
