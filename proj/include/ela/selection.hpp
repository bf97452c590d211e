#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ela/common.hpp"
#include "ela/features.hpp"
#include "ela/learners.hpp"
#include "ela/performance.hpp"

namespace ela::sel {

enum class Paradigm { classification, regression, pairwise };

std::string to_string(Paradigm p);
/// Accepts "classification", "regression", "pairwise".
Paradigm parse_paradigm(const std::string& s);

/// One bit per feature of the schema.
using Mask = std::vector<bool>;

Mask full_mask(std::size_t p);
std::size_t mask_size(const Mask& m);
/// "0110..." with one character per feature.
std::string mask_string(const Mask& m);
Mask mask_from_string(const std::string& s);

/// Feature rows aligned with the columns (problems) of a performance table.
struct Dataset {
    std::vector<std::string> names;
    Eigen::MatrixXd x;  ///< n_problems x p, row i belongs to table.problems[i]; may hold NaN
};

/// Picks the feature row of every table problem. Throws AlignmentError
/// listing the orphans when a table problem has no feature row or a
/// feature row matches neither a table problem nor a dropped one.
Dataset align(const features::FeatureMatrix& features, const perf::PerformanceTable& table);

/// Index of the best solver per problem. Ties (equal relERT) are broken by a
/// uniform draw seeded from (seed, fid, dim).
std::vector<Eigen::Index> label_indices(const perf::PerformanceTable& table, std::uint64_t seed);
std::map<FunctionKey, std::string> label_best(const perf::PerformanceTable& table, std::uint64_t seed);

/// A fitted algorithm selector.
///  - classification: one multiclass model over the table's solvers;
///  - regression: one model per solver predicting log10(relERT);
///  - pairwise: one model per solver pair (i < j) predicting
///    log10(relERT_i) - log10(relERT_j), so a positive value means i is worse.
///    The chosen solver maximises the sum of its signed advantages.
class SelectorModel {
public:
    Paradigm paradigm = Paradigm::classification;
    std::string learner;
    std::string label;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;  ///< full schema
    Mask mask;
    std::vector<std::string> solvers;
    std::vector<double> medians;  ///< imputation value per selected feature
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::shared_ptr<const learn::Model>> models;
    bool degenerate = false;  ///< some model fell back to a constant

    /// `row` follows `feature_names`; non-finite entries are imputed.
    Eigen::Index predict_index(const Eigen::VectorXd& row) const;
    std::string predict(const Eigen::VectorXd& row) const;

    /// FNV-1a hash (hex) of the feature names, stored in the container.
    std::string schema_hash() const;
    nlohmann::json to_json() const;
    /// Throws SchemaMismatch on a wrong container format or schema hash.
    static SelectorModel from_json(const nlohmann::json& j);
};

std::string schema_hash(const std::vector<std::string>& names);

/// Fits a selector on the problems listed in `train_rows` only. Learner
/// randomness derives from `seed`; classification labels use
/// label_indices(table, label_seed).
SelectorModel fit_selector(const Dataset& data, const perf::PerformanceTable& table,
                           std::span<const Eigen::Index> train_rows, Paradigm paradigm,
                           const learn::Learner& learner, const Mask& mask, std::uint64_t seed,
                           std::uint64_t label_seed);

/// Fits on every problem of the table.
SelectorModel train(const Dataset& data, const perf::PerformanceTable& table, Paradigm paradigm,
                    const learn::Learner& learner, const Mask& mask, std::uint64_t seed, std::uint64_t label_seed);

/// The model of one LOFO fold: trained on every problem except `fold`, with
/// a learner seed derived from `seed` and the fold's (fid, dim).
SelectorModel fold_model(const Dataset& data, const perf::PerformanceTable& table, Eigen::Index fold,
                         Paradigm paradigm, const learn::Learner& learner, const Mask& mask, std::uint64_t seed,
                         std::uint64_t label_seed);

struct CvResult {
    std::vector<FunctionKey> problems;
    std::vector<std::string> predicted;
    std::vector<double> relert_cost;
    std::vector<double> relert_nocost;
    double mean_relert = kNaN;
    double mean_relert_no_cost = kNaN;

    /// `fid,dim,predicted,relert_cost,relert_nocost`
    std::string to_csv() const;
};

/// Sample cost of a selector on a problem of dimension d: design_mult * d.
struct CvOptions {
    double design_mult = 50.0;
    std::uint64_t seed = 1;
    std::uint64_t label_seed = 1;
};

/// Relative ERT of choosing solver `s` on problem `p`, including `cost`
/// evaluations of feature computation. Penalised entries are returned as is.
double cost_relert(const perf::PerformanceTable& table, Eigen::Index s, Eigen::Index p, double cost);

/// Leave-one-function-out cross-validation: one fold per table problem.
CvResult lofo_cv(const Dataset& data, const perf::PerformanceTable& table, Paradigm paradigm,
                 const learn::Learner& learner, const Mask& mask, const CvOptions& opt = {});

/// Builds a CvResult from fixed choices (one solver index per problem).
CvResult evaluate_choices(const perf::PerformanceTable& table, const std::vector<Eigen::Index>& choice,
                          double design_mult);

enum class FsStrategy { none, sffs, sfbs, ga_10_5, ga_10_50 };
std::string to_string(FsStrategy s);
/// Accepts "none", "sffs", "sfbs", "ga_10_5", "ga_10_50".
FsStrategy parse_strategy(const std::string& s);

struct GridOptions {
    std::vector<std::string> learners{"cart", "rf", "knn"};
    std::vector<Paradigm> paradigms{Paradigm::classification, Paradigm::regression, Paradigm::pairwise};
    std::vector<FsStrategy> strategies{FsStrategy::none};
    double design_mult = 50.0;
    std::uint64_t seed = 1;  ///< also the label tie-break seed
    int ga_generations = 100;
};

struct GridEntry {
    std::string learner;
    Paradigm paradigm = Paradigm::classification;
    FsStrategy strategy = FsStrategy::none;
    Mask mask;
    std::uint64_t seed = 0;
    std::size_t fs_evaluations = 0;
    CvResult cv;
    std::string error;  ///< empty when the configuration ran

    bool ok() const { return error.empty(); }
    std::string label() const;
};

/// Evaluates the Cartesian product of learners, paradigms and strategies.
/// Entries are ranked by cost-inclusive mean relERT ascending (ties keep grid
/// order); failed configurations come last with their error message.
std::vector<GridEntry> grid_search(const Dataset& data, const perf::PerformanceTable& table, const GridOptions& opt);

}  // namespace ela::sel
