#include <algorithm>
#include <cmath>
#include <numeric>

#include "tree.hpp"

namespace ela::learn {

namespace {

class KnnModel final : public Model {
public:
    KnnModel(Eigen::MatrixXd z, Eigen::VectorXd y, Eigen::VectorXd mean, Eigen::VectorXd scale, int k, Task task,
             int n_classes)
        : z_(std::move(z)), y_(std::move(y)), mean_(std::move(mean)), scale_(std::move(scale)), k_(k), task_(task),
          n_classes_(n_classes) {}

    double predict(const Eigen::VectorXd& x) const override {
        const Eigen::VectorXd q = (x - mean_).cwiseQuotient(scale_);
        const auto n = static_cast<std::size_t>(z_.rows());
        std::vector<std::pair<double, int>> d(n);
        for (std::size_t i = 0; i < n; ++i)
            d[i] = {(z_.row(static_cast<Eigen::Index>(i)).transpose() - q).squaredNorm(), static_cast<int>(i)};
        const auto k = std::min(static_cast<std::size_t>(k_), n);
        std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
        if (task_ == Task::regression) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += y_[d[i].second];
            return s / static_cast<double>(k);
        }
        std::vector<double> votes(static_cast<std::size_t>(n_classes_), 0.0);
        for (std::size_t i = 0; i < k; ++i) votes[static_cast<std::size_t>(y_[d[i].second])] += 1.0;
        const double top = *std::max_element(votes.begin(), votes.end());
        for (std::size_t i = 0; i < k; ++i) {
            const double c = y_[d[i].second];
            if (votes[static_cast<std::size_t>(c)] == top) return c;
        }
        return 0.0;
    }

    nlohmann::json to_json() const override {
        std::vector<std::vector<double>> rows;
        for (Eigen::Index i = 0; i < z_.rows(); ++i) {
            std::vector<double> r;
            for (Eigen::Index c = 0; c < z_.cols(); ++c) r.push_back(z_(i, c));
            rows.push_back(std::move(r));
        }
        return {{"type", "knn"},
                {"task", task_ == Task::classification ? "classification" : "regression"},
                {"k", k_},
                {"n_classes", n_classes_},
                {"mean", std::vector<double>(mean_.data(), mean_.data() + mean_.size())},
                {"scale", std::vector<double>(scale_.data(), scale_.data() + scale_.size())},
                {"y", std::vector<double>(y_.data(), y_.data() + y_.size())},
                {"z", rows}};
    }

private:
    Eigen::MatrixXd z_;
    Eigen::VectorXd y_;
    Eigen::VectorXd mean_;
    Eigen::VectorXd scale_;
    int k_;
    Task task_;
    int n_classes_;
};

Eigen::VectorXd to_eigen(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

std::unique_ptr<Model> detail::knn_model_from_json(const nlohmann::json& j) {
    const Task task = j.at("task") == "classification" ? Task::classification : Task::regression;
    const auto rows = j.at("z").get<std::vector<std::vector<double>>>();
    const auto mean = to_eigen(j.at("mean").get<std::vector<double>>());
    Eigen::MatrixXd z(static_cast<Eigen::Index>(rows.size()), mean.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != mean.size()) throw InvalidArgument("malformed knn model");
        for (std::size_t c = 0; c < rows[i].size(); ++c) z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
    return std::make_unique<KnnModel>(std::move(z), to_eigen(j.at("y").get<std::vector<double>>()), mean,
                                      to_eigen(j.at("scale").get<std::vector<double>>()), j.at("k").get<int>(), task,
                                      j.at("n_classes").get<int>());
}

std::unique_ptr<Model> Knn::fit(const TrainingSet& data, std::uint64_t) const {
    detail::check_training_set(data);
    if (k_ < 1) throw InvalidArgument("k must be positive");
    if (auto c = detail::constant_fallback(data)) return c;
    const Eigen::VectorXd mean = data.x.colwise().mean();
    Eigen::VectorXd scale(data.x.cols());
    const double n = static_cast<double>(data.x.rows());
    for (Eigen::Index c = 0; c < data.x.cols(); ++c) {
        const double ss = (data.x.col(c).array() - mean[c]).square().sum();
        const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
        scale[c] = sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
    }
    Eigen::MatrixXd z = (data.x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
    return std::make_unique<KnnModel>(std::move(z), data.y, mean, scale, k_, data.task, data.n_classes);
}

}  // namespace ela::learn
