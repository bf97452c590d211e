#include <map>
#include <sstream>

#include "ela/csv.hpp"
#include "ela/features.hpp"
#include "stats.hpp"

namespace ela::features {

double FeatureVector::at(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return values[i];
    throw InvalidArgument("no feature named '" + name + "'");
}

void FeatureVector::push(std::string name, double value) {
    names.push_back(std::move(name));
    values.push_back(value);
}

void FeatureVector::append(const FeatureVector& other) {
    names.insert(names.end(), other.names.begin(), other.names.end());
    values.insert(values.end(), other.values.begin(), other.values.end());
}

namespace {

using SetFn = FeatureVector (*)(const sampling::SampleDesign&, const FeatureConfig&);

struct SetEntry {
    const char* name;
    SetFn compute;
    std::vector<std::string> (*names)(const FeatureConfig&);
};

std::vector<std::string> prefixed(const std::string& prefix, std::initializer_list<const char*> items) {
    std::vector<std::string> out;
    for (auto* s : items) out.push_back(prefix + s);
    return out;
}

std::vector<std::string> distr_names(const FeatureConfig&) {
    return prefixed("ela_distr.", {"skewness", "kurtosis", "number_of_peaks"});
}

std::vector<std::string> level_names(const FeatureConfig& cfg) {
    std::vector<std::string> out;
    for (double q : cfg.levelset_quantiles) {
        const auto tag = detail::quantile_tag(q);
        for (const char* s : {"mmce_lda_", "mmce_qda_", "mmce_mda_", "lda_qda_", "lda_mda_", "qda_mda_"})
            out.push_back(std::string("ela_level.") + s + tag);
    }
    out.emplace_back("ela_level.degenerate");
    return out;
}

std::vector<std::string> meta_names(const FeatureConfig&) {
    return prefixed("ela_meta.", {"lin_simple.adj_r2", "lin_simple.coef.min", "lin_simple.coef.max",
                                  "lin_simple.coef.max_by_min", "quad_simple.adj_r2", "quad_simple.cond",
                                  "rank_deficient"});
}

std::vector<std::string> basic_names(const FeatureConfig&) {
    return prefixed("basic.", {"dim", "n", "lower_min", "upper_max", "best", "worst"});
}

std::vector<std::string> cm_names(const FeatureConfig&) {
    return prefixed("cm_angle.", {"dist_ctr2best.mean", "dist_ctr2best.sd", "dist_ctr2worst.mean",
                                  "dist_ctr2worst.sd", "angle.mean", "angle.sd", "frac_nonempty"});
}

std::vector<std::string> disp_names(const FeatureConfig& cfg) {
    std::vector<std::string> out;
    for (double q : cfg.disp_quantiles) {
        const auto tag = detail::quantile_tag(q);
        for (const char* s : {"ratio_mean_", "ratio_median_", "diff_mean_", "diff_median_"})
            out.push_back(std::string("disp.") + s + tag);
    }
    return out;
}

std::vector<std::string> ic_names(const FeatureConfig&) { return prefixed("ic.", {"h_max", "eps_s", "eps_max"}); }

std::vector<std::string> nbc_names(const FeatureConfig&) {
    return prefixed("nbc.", {"nn_nb.sd_ratio", "nn_nb.mean_ratio", "nn_nb.cor", "nb_fitness.cor"});
}

std::vector<std::string> pca_names(const FeatureConfig&) {
    return prefixed("pca.", {"expl_var.cov_x", "expl_var.cor_x", "expl_var.cov_init", "expl_var.cor_init",
                             "expl_var_PC1.cov_x", "expl_var_PC1.cor_x", "expl_var_PC1.cov_init",
                             "expl_var_PC1.cor_init", "zero_var"});
}

const std::vector<SetEntry>& registry() {
    static const std::vector<SetEntry> sets{
        {"ela_distr", &ela_distribution, &distr_names}, {"ela_level", &ela_levelset, &level_names},
        {"ela_meta", &ela_meta, &meta_names},           {"basic", &basic, &basic_names},
        {"cm_angle", &cm_angle, &cm_names},             {"disp", &dispersion, &disp_names},
        {"ic", &information_content, &ic_names},        {"nbc", &nbc, &nbc_names},
        {"pca", &pca, &pca_names},
    };
    return sets;
}

}  // namespace

const std::vector<std::string>& set_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& s : registry()) out.emplace_back(s.name);
        return out;
    }();
    return names;
}

std::vector<std::string> schema(const FeatureConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& s : registry()) {
        auto names = s.names(cfg);
        out.insert(out.end(), names.begin(), names.end());
    }
    for (const auto& s : registry()) out.push_back(std::string("status.") + s.name);
    return out;
}

FeatureVector compute_all(const sampling::SampleDesign& design, const FeatureConfig& cfg) {
    design.y();
    FeatureVector out;
    std::vector<double> status;
    for (const auto& s : registry()) {
        const auto expected = s.names(cfg);
        bool ok = true;
        try {
            FeatureVector part = s.compute(design, cfg);
            if (part.names != expected) throw SchemaMismatch(std::string("feature set ") + s.name + " changed its schema");
            out.append(part);
        } catch (const SchemaMismatch&) {
            throw;
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) {
            for (const auto& n : expected) out.push(n, kNaN);
        }
        status.push_back(ok ? 0.0 : 1.0);
    }
    for (std::size_t i = 0; i < registry().size(); ++i) out.push(std::string("status.") + registry()[i].name, status[i]);
    out.cost_evals = design.evals_consumed;
    return out;
}

double nan_median(std::vector<double> v) {
    std::erase_if(v, [](double x) { return std::isnan(x); });
    return detail::median(std::move(v));
}

void FeatureMatrix::add(const ProblemId& key, const FeatureVector& fv) {
    if (rows.empty() && names.empty()) names = fv.names;
    if (fv.names != names) throw SchemaMismatch("feature names differ from the matrix schema");
    rows.push_back(FeatureRow{key, fv.values, fv.cost_evals});
}

const FeatureRow* FeatureMatrix::find(const FunctionKey& key) const {
    for (const auto& r : rows)
        if (r.key.fid == key.fid && r.key.dim == key.dim) return &r;
    return nullptr;
}

FeatureMatrix aggregate_median(const FeatureMatrix& m) {
    std::map<FunctionKey, std::vector<const FeatureRow*>> groups;
    for (const auto& r : m.rows) {
        if (r.values.size() != m.names.size()) throw SchemaMismatch("row width differs from the schema");
        groups[FunctionKey{r.key.fid, r.key.dim}].push_back(&r);
    }
    FeatureMatrix out;
    out.names = m.names;
    for (const auto& [key, members] : groups) {
        FeatureRow row{ProblemId{key.fid, key.dim, 0}, std::vector<double>(m.names.size()), 0};
        for (std::size_t f = 0; f < m.names.size(); ++f) {
            std::vector<double> col;
            col.reserve(members.size());
            for (const auto* r : members) col.push_back(r->values[f]);
            row.values[f] = nan_median(std::move(col));
        }
        // Median of per-instance costs; all instances normally share one design size.
        std::vector<double> costs;
        for (const auto* r : members) costs.push_back(static_cast<double>(r->cost_evals));
        row.cost_evals = static_cast<std::int64_t>(detail::median(costs));
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::string to_csv(const FeatureMatrix& m, bool with_iid) {
    std::ostringstream out;
    out << "fid,dim";
    if (with_iid) out << ",iid";
    for (const auto& n : m.names) out << ',' << n;
    out << '\n';
    for (const auto& r : m.rows) {
        out << r.key.fid << ',' << r.key.dim;
        if (with_iid) out << ',' << r.key.iid;
        for (double v : r.values) out << ',' << csv::format_double(v);
        out << '\n';
    }
    return out.str();
}

FeatureMatrix from_csv(const std::string& text) {
    const auto rows = csv::lines(text);
    if (rows.empty()) throw ParseError(1, "missing header");
    const auto header = csv::split(rows[0]);
    if (header.size() < 2 || header[0] != "fid" || header[1] != "dim") throw ParseError(1, "expected 'fid,dim' key columns");
    const bool with_iid = header.size() > 2 && header[2] == "iid";
    const std::size_t first = with_iid ? 3 : 2;
    FeatureMatrix m;
    m.names.assign(header.begin() + static_cast<std::ptrdiff_t>(first), header.end());
    for (std::size_t li = 1; li < rows.size(); ++li) {
        if (rows[li].empty()) continue;
        const auto fields = csv::split(rows[li]);
        if (fields.size() != header.size()) throw ParseError(li + 1, "wrong number of fields");
        FeatureRow row;
        auto fid = csv::parse_int(fields[0]);
        auto dim = csv::parse_int(fields[1]);
        auto iid = with_iid ? csv::parse_int(fields[2]) : std::optional<long long>(0);
        if (!fid || !dim || !iid) throw ParseError(li + 1, "bad key columns");
        row.key = ProblemId{static_cast<int>(*fid), static_cast<int>(*dim), static_cast<int>(*iid)};
        for (std::size_t f = first; f < fields.size(); ++f) {
            auto v = csv::parse_double(fields[f]);
            if (!v) throw ParseError(li + 1, "not a number: '" + fields[f] + "'");
            row.values.push_back(*v);
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

}  // namespace ela::features
