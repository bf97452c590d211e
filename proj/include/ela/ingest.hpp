#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "ela/common.hpp"

namespace ela::problems {
class ProblemInstance;
}

namespace ela::ingest {

/// One solver run on one problem instance.
struct RunRecord {
    std::string solver;
    int fid = 0;
    int dim = 0;
    int iid = 0;
    int run = 1;
    std::int64_t fe_count = 1;  ///< evaluations until (un)successful termination
    double best_gap = 0.0;      ///< best |f(x*) - y_opt| reached
    bool budget_exhausted = false;

    ProblemId problem() const { return {fid, dim, iid}; }
    FunctionKey function() const { return {fid, dim}; }
    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline constexpr const char* kRunsHeader = "solver,fid,dim,iid,run,fe_count,best_gap";

/// Parses the canonical run CSV. An optional trailing `budget_exhausted`
/// column (0/1) is accepted. Throws ParseError (with the 1-based line
/// number) on malformed rows and DuplicateRecord on a repeated
/// (solver, fid, dim, iid, run).
std::vector<RunRecord> parse_runs_csv(const std::filesystem::path& path);
std::vector<RunRecord> parse_runs_text(const std::string& text);

/// Inverse of parse_runs_text. The `budget_exhausted` column is written only
/// when some record sets it.
std::string runs_to_csv(const std::vector<RunRecord>& records);

enum class IssueKind { missing_instance, duplicate_run, non_positive_fe };

std::string to_string(IssueKind kind);

struct SanityIssue {
    std::string solver;
    IssueKind kind;
    int fid = 0;
    int dim = 0;
    int iid = 0;

    friend auto operator<=>(const SanityIssue&, const SanityIssue&) = default;
};

struct SanityReport {
    std::vector<SanityIssue> issues;          ///< sorted
    std::set<std::string> valid_solvers;
    std::set<std::string> invalid_solvers;

    bool valid(const std::string& solver) const { return valid_solvers.contains(solver); }
    std::string to_text() const;
    /// One JSON object per line: solver, issue_kind, fid, dim, iid.
    std::string to_jsonl() const;
};

/// A solver is valid iff it has every required iid for every (fid, dim) it
/// appears in. Duplicates and non-positive FE counts are reported but do
/// not by themselves invalidate a solver.
SanityReport sanity_check(const std::vector<RunRecord>& records, const std::set<int>& required_iids = {1, 2, 3, 4, 5});

/// Keeps only records whose iid is in `iids`.
std::vector<RunRecord> restrict_iids(const std::vector<RunRecord>& records, const std::set<int>& iids);

/// Keeps the record with the smallest run index per (solver, fid, dim, iid).
/// Output order follows the input order of the kept records.
std::vector<RunRecord> first_run_only(const std::vector<RunRecord>& records);

/// Deterministic synthetic run data for a problem suite, used by the
/// end-to-end pipeline when no archive is supplied. Three solvers:
///  - `local`:  fast and reliable on unimodal functions, rarely succeeds on
///              multimodal ones;
///  - `global`: reliable everywhere but slow on unimodal functions;
///  - `hybrid`: in between on both.
/// Run cost scales with the dimension; success draws are seeded per
/// (solver, fid, dim, iid).
std::vector<RunRecord> synthetic_runs(const std::vector<problems::ProblemInstance>& instances, std::uint64_t seed);

}  // namespace ela::ingest
