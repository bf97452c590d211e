#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ela/common.hpp"
#include "ela/sampling.hpp"

namespace ela::features {

/// Version of the feature schema produced by compute_all. Bump whenever the
/// name list or the order of sets changes.
inline constexpr int kSchemaVersion = 1;

/// Named landscape features. NaN marks an undefined feature.
struct FeatureVector {
    std::vector<std::string> names;
    std::vector<double> values;
    std::int64_t cost_evals = 0;

    std::size_t size() const noexcept { return names.size(); }
    /// Value of the named feature; throws InvalidArgument when absent.
    double at(const std::string& name) const;
    void push(std::string name, double value);
    void append(const FeatureVector& other);
};

/// Tunables for every feature set. Defaults are the toolkit's pinned values.
struct FeatureConfig {
    std::vector<double> levelset_quantiles{0.10, 0.25, 0.50};
    int levelset_folds = 10;
    int mda_components = 2;
    int mda_em_iterations = 20;
    std::vector<double> disp_quantiles{0.02, 0.05, 0.10, 0.25};
    double ic_eps_log10_min = -5.0;
    double ic_eps_log10_max = 15.0;
    int ic_eps_count = 1000;
    double ic_settling_threshold = 0.05;
    int cm_blocks_per_dim = 3;
    int kde_grid = 512;
    double pca_variance_share = 0.9;
    /// Seeds fold assignment, EM initialisation and tie-breaking. Features
    /// are a pure function of (design, config).
    std::uint64_t seed = 1;
};

// Individual feature sets. Each throws InvalidArgument when its
// preconditions (minimum sample size, attached values) do not hold.

/// `ela_distr.{skewness,kurtosis,number_of_peaks}`
FeatureVector ela_distribution(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// Misclassification errors of LDA, QDA and a 2-component mixture
/// discriminant (MDA) under stratified k-fold CV, per y-quantile split.
FeatureVector ela_levelset(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// Linear and pure-quadratic least-squares fits of y on x.
FeatureVector ela_meta(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// Pairwise distances among the best q-fraction of points vs. all points.
FeatureVector dispersion(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// Nearest-better clustering statistics.
FeatureVector nbc(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// Information content of slope symbols along a nearest-neighbour tour.
FeatureVector information_content(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// Cell-mapping angle features on a blocks^d grid (sparse; empty cells are
/// never materialised).
FeatureVector cm_angle(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// Dimension, sample size, bounds and objective range.
FeatureVector basic(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// Principal component features of X and [X | y].
FeatureVector pca(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// The nine sets above in the fixed order
/// ela_distr, ela_level, ela_meta, basic, cm_angle, disp, ic, nbc, pca,
/// followed by one `status.<set>` flag per set (0 = ok, 1 = failed, in
/// which case that set's features are NaN). Never throws for a
/// degenerate sample; throws only when values are missing.
FeatureVector compute_all(const sampling::SampleDesign& design, const FeatureConfig& cfg = {});

/// Feature names produced by compute_all for a given config.
std::vector<std::string> schema(const FeatureConfig& cfg = {});

/// Names of the feature sets, in compute_all order.
const std::vector<std::string>& set_names();

/// One row per problem. `key.iid == 0` marks a row aggregated over instances.
struct FeatureRow {
    ProblemId key;
    std::vector<double> values;
    std::int64_t cost_evals = 0;
};

struct FeatureMatrix {
    std::vector<std::string> names;
    std::vector<FeatureRow> rows;

    /// Appends a vector; throws SchemaMismatch when names differ from the
    /// matrix's (the first row fixes the schema).
    void add(const ProblemId& key, const FeatureVector& fv);
    const FeatureRow* find(const FunctionKey& key) const;
};

/// NaN-ignoring median over instances, keyed by (fid, dim) with iid = 0.
/// Output rows are ordered by (dim, fid).
FeatureMatrix aggregate_median(const FeatureMatrix& rows);

/// Key columns `fid,dim` (plus `iid` when `with_iid`) then one column per
/// feature; NaN renders as an empty cell.
std::string to_csv(const FeatureMatrix& m, bool with_iid);
FeatureMatrix from_csv(const std::string& text);

/// Median of the finite entries; NaN when there are none.
double nan_median(std::vector<double> v);

}  // namespace ela::features
