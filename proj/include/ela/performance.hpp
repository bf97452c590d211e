#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ela/common.hpp"
#include "ela/ingest.hpp"

namespace ela::perf {

inline constexpr double kDefaultEpsilon = 1e-2;
inline constexpr double kPenaltyFactor = 10.0;

/// A run succeeds iff its best gap lies in the closed interval [0, epsilon].
bool success(const ingest::RunRecord& record, double epsilon);

/// Expected runtime: total evaluations of all runs over the number of
/// successful runs; nullopt when no run succeeded.
std::optional<double> ert(std::span<const ingest::RunRecord> records, double epsilon);

/// ERT and PAR10-imputed relative ERT, solvers x problems.
struct PerformanceTable {
    std::vector<std::string> solvers;
    std::vector<FunctionKey> problems;
    Eigen::MatrixXd ert;     ///< +inf where undefined
    Eigen::MatrixXd relert;  ///< finite; undefined entries hold `penalty`
    double epsilon = kDefaultEpsilon;
    double penalty = kNaN;
    std::vector<FunctionKey> dropped;  ///< problems no solver solved

    Eigen::Index n_solvers() const { return static_cast<Eigen::Index>(solvers.size()); }
    Eigen::Index n_problems() const { return static_cast<Eigen::Index>(problems.size()); }
    bool imputed(Eigen::Index s, Eigen::Index p) const { return !std::isfinite(ert(s, p)); }
    /// Smallest ERT on a problem (the normaliser of its relERT column).
    double best_ert(Eigen::Index p) const;
    Eigen::Index solver_index(const std::string& solver) const;   ///< -1 if absent
    Eigen::Index problem_index(const FunctionKey& key) const;     ///< -1 if absent
};

/// Builds the table from a raw ERT matrix (+inf = undefined). Problems that
/// no solver solved are moved to `dropped`. Penalty = 10 x the largest finite
/// relERT.
PerformanceTable table_from_ert(std::vector<std::string> solvers, std::vector<FunctionKey> problems,
                                 const Eigen::MatrixXd& ert, double epsilon);

/// ERT per (solver, fid, dim) pooled over instances, then relERT with PAR10
/// imputation. `solvers` empty means every solver in `records`, sorted.
/// Throws InvalidArgument when a listed solver lacks records for a problem.
PerformanceTable relert_table(const std::vector<ingest::RunRecord>& records, std::vector<std::string> solvers = {},
                              double epsilon = kDefaultEpsilon);

struct BaselineChoice {
    std::vector<Eigen::Index> choice;  ///< solver index per problem
    double mean_relert = kNaN;
};

/// Virtual best solver: per problem the lowest relERT, ties to the first
/// solver in table order.
BaselineChoice vbs(const PerformanceTable& table);

struct SingleBest {
    std::string solver;
    Eigen::Index index = -1;
    double mean_relert = kNaN;
};

/// Solver with the lowest mean relERT over all problems (ties to the first).
SingleBest sbs(const PerformanceTable& table);

/// Mean relERT over leave-one-problem-out folds when the SBS is chosen on
/// each fold's training problems and applied to the held-out problem.
double sbs_per_fold_mean(const PerformanceTable& table);

/// Mean relERT of every solver, in table order.
Eigen::VectorXd mean_relert(const PerformanceTable& table);

struct Portfolio {
    std::vector<std::string> members;                  ///< ordered by mean relERT
    std::map<int, std::set<std::string>> per_dim_sets;
    std::map<FunctionKey, std::string> best_per_problem;
};

class EmptyPortfolio : public DataError {
public:
    EmptyPortfolio(const std::string& what, std::map<int, std::set<std::string>> per_dim)
        : DataError(what), per_dim_sets(std::move(per_dim)) {}
    std::map<int, std::set<std::string>> per_dim_sets;
};

/// Per dimension, the union over functions of the solvers ranked within the
/// top `top_k` by ERT (competition ranking: ties share the better rank;
/// undefined ERTs never qualify). Members are the intersection over
/// dimensions. Throws EmptyPortfolio when the intersection is empty.
Portfolio build_portfolio(const PerformanceTable& table, int top_k = 3);

/// Competition ("1224") ranks of the finite entries of one ERT column; 0
/// marks undefined.
std::vector<int> competition_ranks(const Eigen::VectorXd& ert_column);

std::string ert_csv(const PerformanceTable& table);
std::string relert_csv(const PerformanceTable& table);
/// Sidecar metadata: epsilon, penalty, dropped problems.
std::string meta_json(const PerformanceTable& table);
std::string portfolio_json(const Portfolio& portfolio);

PerformanceTable table_from_files(const std::string& ert_text, const std::string& relert_text,
                                  const std::string& meta_text);

}  // namespace ela::perf
