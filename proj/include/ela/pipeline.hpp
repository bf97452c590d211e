#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ela::pipeline {

/// Experiment settings. Keys of the JSON config file carry the same names;
/// every key is optional.
struct Config {
    std::vector<int> dims{2, 3, 5, 10};
    std::vector<int> fids;                 ///< empty = every implemented function
    std::vector<int> iids{1, 2, 3, 4, 5};
    std::optional<std::filesystem::path> runs;  ///< run CSV; synthetic runs when absent
    double design_mult = 50.0;              ///< sample size = design_mult * dim
    double epsilon = 1e-2;
    int top_k = 3;
    std::vector<std::string> learners{"cart", "rf", "knn"};
    std::vector<std::string> paradigms{"classification", "regression", "pairwise"};
    std::vector<std::string> fs{"none"};
    int ga_generations = 100;
    std::uint64_t seed = 1;
    std::filesystem::path out = "ela_out";

    std::vector<int> function_ids() const;
};

/// Throws InvalidArgument on unknown keys or ill-typed values.
Config config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Config& c);
/// Relative `runs` paths are resolved against the config file's directory.
Config load_config(const std::filesystem::path& path);

/// Samples every suite instance, computes all features and writes
/// features/instances.csv, features/aggregated.csv and features/meta.json.
void cmd_features(const Config& c);

/// Ingests runs (or generates synthetic ones), checks them, builds the
/// candidate table and the portfolio, and writes the portfolio's ERT and
/// relERT tables under performance/.
void cmd_performance(const Config& c);

/// Grid search over learners x paradigms x feature selection with LOFO-CV;
/// writes train/leaderboard.csv, train/best_model.json,
/// train/cv_predictions.csv and train/cv_all.csv.
void cmd_train(const Config& c);

/// Table-I matrix, scatter data, confusion table and ERT ratios under report/.
void cmd_report(const Config& c);

void run_all(const Config& c);

}  // namespace ela::pipeline
