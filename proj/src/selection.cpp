#include "ela/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "ela/csv.hpp"
#include "ela/feature_selection.hpp"
#include "ela/parallel.hpp"
#include "ela/rng.hpp"

namespace ela::sel {

std::string to_string(Paradigm p) {
    switch (p) {
        case Paradigm::classification: return "classification";
        case Paradigm::regression: return "regression";
        case Paradigm::pairwise: return "pairwise";
    }
    return "unknown";
}

Paradigm parse_paradigm(const std::string& s) {
    if (s == "classification") return Paradigm::classification;
    if (s == "regression") return Paradigm::regression;
    if (s == "pairwise") return Paradigm::pairwise;
    throw InvalidArgument("unknown paradigm '" + s + "' (known: classification, regression, pairwise)");
}

Mask full_mask(std::size_t p) { return Mask(p, true); }

std::size_t mask_size(const Mask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), true)); }

std::string mask_string(const Mask& m) {
    std::string s;
    for (bool b : m) s.push_back(b ? '1' : '0');
    return s;
}

Mask mask_from_string(const std::string& s) {
    Mask m;
    for (char c : s) {
        if (c != '0' && c != '1') throw InvalidArgument("mask must consist of 0 and 1");
        m.push_back(c == '1');
    }
    return m;
}

Dataset align(const features::FeatureMatrix& features, const perf::PerformanceTable& table) {
    std::map<FunctionKey, const features::FeatureRow*> rows;
    for (const auto& r : features.rows) {
        const FunctionKey k{r.key.fid, r.key.dim};
        if (!rows.emplace(k, &r).second)
            throw AlignmentError("several feature rows for problem " + k.label() + "; aggregate instances first");
    }
    std::vector<std::string> missing, orphans;
    for (const auto& p : table.problems)
        if (!rows.contains(p)) missing.push_back(p.label());
    const std::set<FunctionKey> known(table.problems.begin(), table.problems.end());
    const std::set<FunctionKey> dropped(table.dropped.begin(), table.dropped.end());
    for (const auto& [k, r] : rows)
        if (!known.contains(k) && !dropped.contains(k)) orphans.push_back(k.label());
    if (!missing.empty() || !orphans.empty()) {
        std::ostringstream msg;
        msg << "features and performance table are not aligned";
        if (!missing.empty()) msg << "; problems without features: " << csv::join(missing);
        if (!orphans.empty()) msg << "; feature rows without performance data: " << csv::join(orphans);
        throw AlignmentError(msg.str());
    }
    Dataset d;
    d.names = features.names;
    d.x.resize(table.n_problems(), static_cast<Eigen::Index>(features.names.size()));
    for (Eigen::Index i = 0; i < table.n_problems(); ++i) {
        const auto& v = rows.at(table.problems[static_cast<std::size_t>(i)])->values;
        for (std::size_t c = 0; c < v.size(); ++c) d.x(i, static_cast<Eigen::Index>(c)) = v[c];
    }
    return d;
}

std::vector<Eigen::Index> label_indices(const perf::PerformanceTable& table, std::uint64_t seed) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index p = 0; p < table.n_problems(); ++p) {
        const double best = table.relert.col(p).minCoeff();
        std::vector<Eigen::Index> tied;
        for (Eigen::Index s = 0; s < table.n_solvers(); ++s)
            if (table.relert(s, p) == best) tied.push_back(s);
        const auto& key = table.problems[static_cast<std::size_t>(p)];
        if (tied.size() == 1) {
            out.push_back(tied[0]);
            continue;
        }
        Rng rng(derive_seed(seed, {0x7ab1e, static_cast<std::uint64_t>(key.fid), static_cast<std::uint64_t>(key.dim)}));
        out.push_back(tied[rng.below(tied.size())]);
    }
    return out;
}

std::map<FunctionKey, std::string> label_best(const perf::PerformanceTable& table, std::uint64_t seed) {
    std::map<FunctionKey, std::string> out;
    const auto idx = label_indices(table, seed);
    for (std::size_t p = 0; p < idx.size(); ++p) out[table.problems[p]] = table.solvers[static_cast<std::size_t>(idx[p])];
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Eigen::Index> selected_columns(const Mask& mask) {
    std::vector<Eigen::Index> cols;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) cols.push_back(static_cast<Eigen::Index>(i));
    return cols;
}

Eigen::VectorXd project(const Eigen::VectorXd& row, const std::vector<Eigen::Index>& cols,
                        const std::vector<double>& medians) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const double x = row[cols[c]];
        v[static_cast<Eigen::Index>(c)] = std::isfinite(x) ? x : medians[c];
    }
    return v;
}

}  // namespace

Eigen::Index SelectorModel::predict_index(const Eigen::VectorXd& row) const {
    if (row.size() != static_cast<Eigen::Index>(feature_names.size()))
        throw SchemaMismatch("feature vector has " + std::to_string(row.size()) + " entries, model expects " +
                             std::to_string(feature_names.size()));
    const Eigen::VectorXd x = project(row, selected_columns(mask), medians);
    const auto n = static_cast<Eigen::Index>(solvers.size());
    switch (paradigm) {
        case Paradigm::classification: {
            const double c = models.at(0)->predict(x);
            return std::clamp(static_cast<Eigen::Index>(std::llround(c)), Eigen::Index{0}, n - 1);
        }
        case Paradigm::regression: {
            Eigen::Index best = 0;
            double best_v = kInf;
            for (Eigen::Index s = 0; s < n; ++s) {
                const double v = models[static_cast<std::size_t>(s)]->predict(x);
                if (v < best_v) best_v = v, best = s;
            }
            return best;
        }
        case Paradigm::pairwise: {
            std::vector<double> score(static_cast<std::size_t>(n), 0.0);
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                const double d = models[k]->predict(x);
                score[static_cast<std::size_t>(pairs[k].first)] -= d;
                score[static_cast<std::size_t>(pairs[k].second)] += d;
            }
            return static_cast<Eigen::Index>(std::max_element(score.begin(), score.end()) - score.begin());
        }
    }
    return 0;
}

std::string SelectorModel::predict(const Eigen::VectorXd& row) const {
    return solvers[static_cast<std::size_t>(predict_index(row))];
}

std::string schema_hash(const std::vector<std::string>& names) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& n : names) {
        for (unsigned char c : n) h = (h ^ c) * 0x100000001b3ULL;
        h = (h ^ 0x0a) * 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    std::string s = out.str();
    return std::string(16 - s.size(), '0') + s;
}

std::string SelectorModel::schema_hash() const { return sel::schema_hash(feature_names); }

nlohmann::json SelectorModel::to_json() const {
    nlohmann::json j;
    j["format"] = "ela-selector";
    j["version"] = 1;
    j["feature_schema_version"] = features::kSchemaVersion;
    j["schema_hash"] = schema_hash();
    j["paradigm"] = to_string(paradigm);
    j["learner"] = learner;
    j["label"] = label;
    j["seed"] = seed;
    j["feature_names"] = feature_names;
    j["mask"] = mask_string(mask);
    j["solvers"] = solvers;
    j["medians"] = medians;
    j["pairs"] = pairs;
    j["degenerate"] = degenerate;
    auto ms = nlohmann::json::array();
    for (const auto& m : models) ms.push_back(m->to_json());
    j["models"] = std::move(ms);
    return j;
}

SelectorModel SelectorModel::from_json(const nlohmann::json& j) {
    try {
        if (j.value("format", "") != "ela-selector" || j.value("version", 0) != 1)
            throw SchemaMismatch("not a version 1 selector container");
        SelectorModel m;
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        if (j.at("schema_hash").get<std::string>() != m.schema_hash())
            throw SchemaMismatch("schema hash does not match the stored feature names");
        m.paradigm = parse_paradigm(j.at("paradigm").get<std::string>());
        m.learner = j.at("learner").get<std::string>();
        m.label = j.at("label").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.mask = mask_from_string(j.at("mask").get<std::string>());
        m.solvers = j.at("solvers").get<std::vector<std::string>>();
        for (const auto& v : j.at("medians")) m.medians.push_back(v.is_null() ? kNaN : v.get<double>());
        m.pairs = j.at("pairs").get<std::vector<std::pair<int, int>>>();
        m.degenerate = j.at("degenerate").get<bool>();
        for (const auto& mj : j.at("models")) m.models.push_back(learn::model_from_json(mj));
        if (m.mask.size() != m.feature_names.size() || m.medians.size() != mask_size(m.mask))
            throw SchemaMismatch("mask or medians do not match the feature schema");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("malformed selector container: ") + e.what());
    }
}

SelectorModel fit_selector(const Dataset& data, const perf::PerformanceTable& table,
                           std::span<const Eigen::Index> train_rows, Paradigm paradigm,
                           const learn::Learner& learner, const Mask& mask, std::uint64_t seed,
                           std::uint64_t label_seed) {
    if (mask.size() != data.names.size()) throw InvalidArgument("mask length does not match the feature schema");
    if (mask_size(mask) == 0) throw InvalidArgument("feature mask selects no feature");
    if (train_rows.empty()) throw InvalidArgument("no training problems");
    if (data.x.rows() != table.n_problems()) throw AlignmentError("dataset rows do not match the table's problems");

    SelectorModel m;
    m.paradigm = paradigm;
    m.learner = learner.id();
    m.label = to_string(paradigm) + "/" + learner.id();
    m.seed = seed;
    m.feature_names = data.names;
    m.mask = mask;
    m.solvers = table.solvers;

    const auto cols = selected_columns(mask);
    const auto n = static_cast<Eigen::Index>(train_rows.size());
    for (auto c : cols) {
        std::vector<double> v;
        for (auto r : train_rows) v.push_back(data.x(r, c));
        const double med = features::nan_median(std::move(v));
        m.medians.push_back(std::isfinite(med) ? med : 0.0);
    }
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index i = 0; i < n; ++i) x.row(i) = project(data.x.row(train_rows[static_cast<std::size_t>(i)]).transpose(), cols, m.medians).transpose();

    auto log_relert = [&](Eigen::Index s, Eigen::Index p) { return std::log10(table.relert(s, p)); };
    auto fit = [&](const Eigen::VectorXd& y, learn::Task task, int n_classes, std::uint64_t tag) {
        std::shared_ptr<const learn::Model> model = learner.fit({x, y, task, n_classes}, derive_seed(seed, {tag}));
        if (dynamic_cast<const learn::ConstantModel*>(model.get())) m.degenerate = true;
        m.models.push_back(std::move(model));
    };

    const auto ns = table.n_solvers();
    switch (paradigm) {
        case Paradigm::classification: {
            const auto labels = label_indices(table, label_seed);
            Eigen::VectorXd y(n);
            for (Eigen::Index i = 0; i < n; ++i) y[i] = static_cast<double>(labels[static_cast<std::size_t>(train_rows[static_cast<std::size_t>(i)])]);
            fit(y, learn::Task::classification, static_cast<int>(ns), 0);
            break;
        }
        case Paradigm::regression:
            for (Eigen::Index s = 0; s < ns; ++s) {
                Eigen::VectorXd y(n);
                for (Eigen::Index i = 0; i < n; ++i) y[i] = log_relert(s, train_rows[static_cast<std::size_t>(i)]);
                fit(y, learn::Task::regression, 0, static_cast<std::uint64_t>(s));
            }
            break;
        case Paradigm::pairwise:
            for (Eigen::Index a = 0; a < ns; ++a)
                for (Eigen::Index b = a + 1; b < ns; ++b) {
                    Eigen::VectorXd y(n);
                    for (Eigen::Index i = 0; i < n; ++i) {
                        const auto r = train_rows[static_cast<std::size_t>(i)];
                        y[i] = log_relert(a, r) - log_relert(b, r);
                    }
                    m.pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
                    fit(y, learn::Task::regression, 0, static_cast<std::uint64_t>(a * ns + b));
                }
            break;
    }
    return m;
}

SelectorModel train(const Dataset& data, const perf::PerformanceTable& table, Paradigm paradigm,
                    const learn::Learner& learner, const Mask& mask, std::uint64_t seed, std::uint64_t label_seed) {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(table.n_problems()));
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    return fit_selector(data, table, rows, paradigm, learner, mask, seed, label_seed);
}

SelectorModel fold_model(const Dataset& data, const perf::PerformanceTable& table, Eigen::Index fold,
                         Paradigm paradigm, const learn::Learner& learner, const Mask& mask, std::uint64_t seed,
                         std::uint64_t label_seed) {
    if (fold < 0 || fold >= table.n_problems()) throw InvalidArgument("fold index out of range");
    std::vector<Eigen::Index> rows;
    for (Eigen::Index p = 0; p < table.n_problems(); ++p)
        if (p != fold) rows.push_back(p);
    const auto& key = table.problems[static_cast<std::size_t>(fold)];
    return fit_selector(data, table, rows, paradigm, learner, mask,
                        derive_seed(seed, {0xf01d, static_cast<std::uint64_t>(key.fid), static_cast<std::uint64_t>(key.dim)}),
                        label_seed);
}

double cost_relert(const perf::PerformanceTable& table, Eigen::Index s, Eigen::Index p, double cost) {
    if (table.imputed(s, p)) return table.relert(s, p);
    return (table.ert(s, p) + cost) / table.best_ert(p);
}

CvResult evaluate_choices(const perf::PerformanceTable& table, const std::vector<Eigen::Index>& choice,
                          double design_mult) {
    if (static_cast<Eigen::Index>(choice.size()) != table.n_problems())
        throw InvalidArgument("one choice per problem required");
    CvResult r;
    double sc = 0.0, sn = 0.0;
    for (Eigen::Index p = 0; p < table.n_problems(); ++p) {
        const auto s = choice[static_cast<std::size_t>(p)];
        const auto& key = table.problems[static_cast<std::size_t>(p)];
        r.problems.push_back(key);
        r.predicted.push_back(table.solvers[static_cast<std::size_t>(s)]);
        r.relert_cost.push_back(cost_relert(table, s, p, design_mult * key.dim));
        r.relert_nocost.push_back(table.relert(s, p));
        sc += r.relert_cost.back();
        sn += r.relert_nocost.back();
    }
    const double np = static_cast<double>(table.n_problems());
    r.mean_relert = np > 0 ? sc / np : kNaN;
    r.mean_relert_no_cost = np > 0 ? sn / np : kNaN;
    return r;
}

CvResult lofo_cv(const Dataset& data, const perf::PerformanceTable& table, Paradigm paradigm,
                 const learn::Learner& learner, const Mask& mask, const CvOptions& opt) {
    if (table.n_problems() < 2) throw InvalidArgument("LOFO-CV needs at least two problems");
    std::vector<Eigen::Index> choice(static_cast<std::size_t>(table.n_problems()));
    parallel_for(choice.size(), [&](std::size_t p) {
        const auto fold = static_cast<Eigen::Index>(p);
        const auto m = fold_model(data, table, fold, paradigm, learner, mask, opt.seed, opt.label_seed);
        choice[p] = m.predict_index(data.x.row(fold).transpose());
    });
    return evaluate_choices(table, choice, opt.design_mult);
}

std::string CvResult::to_csv() const {
    std::ostringstream out;
    out << "fid,dim,predicted,relert_cost,relert_nocost\n";
    for (std::size_t i = 0; i < problems.size(); ++i)
        out << problems[i].fid << ',' << problems[i].dim << ',' << predicted[i] << ',' << csv::format_double(relert_cost[i])
            << ',' << csv::format_double(relert_nocost[i]) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------

std::string to_string(FsStrategy s) {
    switch (s) {
        case FsStrategy::none: return "none";
        case FsStrategy::sffs: return "sffs";
        case FsStrategy::sfbs: return "sfbs";
        case FsStrategy::ga_10_5: return "ga_10_5";
        case FsStrategy::ga_10_50: return "ga_10_50";
    }
    return "unknown";
}

FsStrategy parse_strategy(const std::string& s) {
    for (auto v : {FsStrategy::none, FsStrategy::sffs, FsStrategy::sfbs, FsStrategy::ga_10_5, FsStrategy::ga_10_50})
        if (to_string(v) == s) return v;
    throw InvalidArgument("unknown feature selection strategy '" + s + "' (known: none, sffs, sfbs, ga_10_5, ga_10_50)");
}

std::string GridEntry::label() const { return learner + "/" + to_string(paradigm) + "/" + to_string(strategy); }

namespace {

std::uint64_t string_tag(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return h;
}

}  // namespace

std::vector<GridEntry> grid_search(const Dataset& data, const perf::PerformanceTable& table, const GridOptions& opt) {
    if (opt.learners.empty() || opt.paradigms.empty() || opt.strategies.empty())
        throw InvalidArgument("grid axes must not be empty");
    std::vector<GridEntry> entries;
    for (const auto& l : opt.learners)
        for (auto p : opt.paradigms)
            for (auto s : opt.strategies) {
                GridEntry e;
                e.learner = l;
                e.paradigm = p;
                e.strategy = s;
                e.seed = derive_seed(opt.seed, {string_tag(l), static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(s)});
                entries.push_back(std::move(e));
            }

    for (auto& e : entries) {
        try {
            const auto learner = learn::make_learner(e.learner);
            const CvOptions cv{opt.design_mult, e.seed, opt.seed};
            const std::size_t p = data.names.size();
            const auto scorer = fs::cv_scorer(data, table, e.paradigm, *learner, cv);
            fs::Result r;
            switch (e.strategy) {
                case FsStrategy::none: r.mask = full_mask(p); break;
                case FsStrategy::sffs: r = fs::sffs(p, scorer); break;
                case FsStrategy::sfbs: r = fs::sfbs(p, scorer); break;
                case FsStrategy::ga_10_5:
                case FsStrategy::ga_10_50: {
                    fs::GaOptions ga;
                    ga.lambda = e.strategy == FsStrategy::ga_10_5 ? 5 : 50;
                    ga.generations = opt.ga_generations;
                    ga.seed = derive_seed(e.seed, {0x6a});
                    r = fs::ga(p, scorer, ga);
                    break;
                }
            }
            e.mask = r.mask;
            e.fs_evaluations = r.evaluations;
            e.cv = lofo_cv(data, table, e.paradigm, *learner, e.mask, cv);
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const GridEntry& a, const GridEntry& b) {
        if (a.ok() != b.ok()) return a.ok();
        return a.ok() && a.cv.mean_relert < b.cv.mean_relert;
    });
    return entries;
}

}  // namespace ela::sel
