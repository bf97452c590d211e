#pragma once

#include <string>
#include <vector>

#include "ela/performance.hpp"
#include "ela/selection.hpp"

namespace ela::report {

/// The five BBOB function groups F1-F5, F6-F9, F10-F14, F15-F19, F20-F24.
struct Group {
    std::string label;
    int first_fid;
    int last_fid;
};

const std::vector<Group>& bbob_groups();
/// Label of the group containing `fid`; throws InvalidArgument outside 1..24.
std::string group_of(int fid);

struct SelectorResult {
    std::string name;
    sel::CvResult cv;
};

/// Mean relERT per (dimension, group) cell, with "all" rows for each
/// dimension and for the whole table. Columns: dim, group, n, one per solver
/// (relERT without costs), one per selector (cost-inclusive relERT), and
/// `sbs`, the best single solver of the cell.
std::string table_one_csv(const perf::PerformanceTable& table, const std::vector<SelectorResult>& selectors);

/// ERT pairs (VBS, selector) per problem on log scale. A selector's ERT
/// includes its feature cost; penalised choices are reported as
/// penalty x best ERT and flagged.
std::string scatter_csv(const perf::PerformanceTable& table, const std::vector<SelectorResult>& selectors);

/// Best solver (rows) against predicted solver (columns); the `#` column holds
/// the row sums, i.e. the best-solver label counts.
std::string confusion_csv(const perf::PerformanceTable& table, const std::vector<Eigen::Index>& labels,
                          const sel::CvResult& cv);

/// Per problem: best ERT among portfolio members over the best ERT among all
/// candidate solvers.
std::string ratio_csv(const perf::PerformanceTable& candidates, const perf::Portfolio& portfolio);

/// Minimal SVG renderings of scatter_csv and ratio_csv data.
std::string scatter_svg(const perf::PerformanceTable& table, const std::vector<SelectorResult>& selectors);
std::string ratio_svg(const perf::PerformanceTable& candidates, const perf::Portfolio& portfolio);

}  // namespace ela::report
