#include "ela/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "ela/csv.hpp"
#include "ela/features.hpp"
#include "ela/ingest.hpp"
#include "ela/parallel.hpp"
#include "ela/performance.hpp"
#include "ela/problems.hpp"
#include "ela/report.hpp"
#include "ela/rng.hpp"
#include "ela/sampling.hpp"
#include "ela/selection.hpp"

namespace ela::pipeline {

namespace fsys = std::filesystem;

namespace {

void log(const std::string& msg) { std::cerr << "[ela] " << msg << '\n'; }

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
    }
}

std::string read_artifact(const fsys::path& path, const std::string& hint) {
    try {
        return csv::read_file(path);
    } catch (const FileNotFound&) {
        throw FileNotFound("missing artifact " + path.string() + "; " + hint);
    }
}

std::vector<sel::Paradigm> paradigms_of(const Config& c) {
    std::vector<sel::Paradigm> out;
    for (const auto& p : c.paradigms) out.push_back(sel::parse_paradigm(p));
    return out;
}

std::vector<sel::FsStrategy> strategies_of(const Config& c) {
    std::vector<sel::FsStrategy> out;
    for (const auto& s : c.fs) out.push_back(sel::parse_strategy(s));
    return out;
}

void validate(const Config& c) {
    if (c.dims.empty() || c.iids.empty()) throw InvalidArgument("dims and iids must not be empty");
    for (int d : c.dims)
        if (d < 2) throw InvalidArgument("dims must be at least 2");
    for (int i : c.iids)
        if (i < 1) throw InvalidArgument("iids must be positive");
    const auto& known = problems::implemented_fids();
    for (int f : c.fids)
        if (std::find(known.begin(), known.end(), f) == known.end())
            throw InvalidArgument("fid " + std::to_string(f) + " is not implemented");
    if (!(c.design_mult > 0.0)) throw InvalidArgument("design_mult must be positive");
    if (!(c.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    if (c.top_k < 1) throw InvalidArgument("top_k must be positive");
    if (c.ga_generations < 0) throw InvalidArgument("ga_generations must not be negative");
    if (c.learners.empty() || c.paradigms.empty() || c.fs.empty()) throw InvalidArgument("grid axes must not be empty");
    for (const auto& l : c.learners) learn::make_learner(l);
    paradigms_of(c);
    strategies_of(c);
}

perf::PerformanceTable load_table(const fsys::path& dir, const std::string& prefix) {
    const std::string hint = "run `ela performance` first";
    return perf::table_from_files(read_artifact(dir / (prefix + "ert.csv"), hint),
                                  read_artifact(dir / (prefix + "relert.csv"), hint),
                                  read_artifact(dir / (prefix + "meta.json"), hint));
}

}  // namespace

std::vector<int> Config::function_ids() const { return fids.empty() ? problems::implemented_fids() : fids; }

Config config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    static const std::set<std::string> known{"dims",     "fids",     "iids",      "runs", "design_mult",
                                             "epsilon",  "top_k",    "learners",  "paradigms", "fs",
                                             "ga_generations", "seed", "out"};
    for (const auto& [k, v] : j.items())
        if (!known.contains(k)) throw InvalidArgument("unknown config key '" + k + "'");
    Config c;
    read_key(j, "dims", c.dims);
    read_key(j, "fids", c.fids);
    read_key(j, "iids", c.iids);
    if (j.contains("runs") && !j.at("runs").is_null()) {
        std::string r;
        read_key(j, "runs", r);
        c.runs = r;
    }
    read_key(j, "design_mult", c.design_mult);
    read_key(j, "epsilon", c.epsilon);
    read_key(j, "top_k", c.top_k);
    read_key(j, "learners", c.learners);
    read_key(j, "paradigms", c.paradigms);
    read_key(j, "fs", c.fs);
    read_key(j, "ga_generations", c.ga_generations);
    read_key(j, "seed", c.seed);
    if (j.contains("out")) {
        std::string o;
        read_key(j, "out", o);
        c.out = o;
    }
    validate(c);
    return c;
}

nlohmann::json to_json(const Config& c) {
    nlohmann::json j;
    j["dims"] = c.dims;
    j["fids"] = c.function_ids();
    j["iids"] = c.iids;
    j["runs"] = c.runs ? nlohmann::json(c.runs->string()) : nlohmann::json(nullptr);
    j["design_mult"] = c.design_mult;
    j["epsilon"] = c.epsilon;
    j["top_k"] = c.top_k;
    j["learners"] = c.learners;
    j["paradigms"] = c.paradigms;
    j["fs"] = c.fs;
    j["ga_generations"] = c.ga_generations;
    j["seed"] = c.seed;
    j["out"] = c.out.string();
    return j;
}

Config load_config(const fsys::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(csv::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("cannot parse config " + path.string() + ": " + e.what());
    }
    Config c = config_from_json(j);
    if (c.runs && c.runs->is_relative()) c.runs = path.parent_path() / *c.runs;
    return c;
}

// ---------------------------------------------------------------------------

void cmd_features(const Config& c) {
    validate(c);
    const auto instances = problems::suite(c.dims, c.function_ids(), c.iids);
    log("features: " + std::to_string(instances.size()) + " instances");
    features::FeatureConfig fcfg;
    fcfg.seed = c.seed;
    std::vector<features::FeatureVector> vectors(instances.size());
    parallel_for(instances.size(), [&](std::size_t i) {
        const auto& inst = instances[i];
        const auto& id = inst.id();
        const auto n = static_cast<Eigen::Index>(std::llround(c.design_mult * id.dim));
        auto design = sampling::improved_lhd(n, inst.domain(),
                                             derive_seed(c.seed, {static_cast<std::uint64_t>(id.fid),
                                                                  static_cast<std::uint64_t>(id.dim),
                                                                  static_cast<std::uint64_t>(id.iid)}));
        try {
            design = sampling::evaluate_design(std::move(design), inst.objective());
        } catch (const EvaluationError& e) {
            throw EvaluationError(e.point_index(), "instance fid=" + std::to_string(id.fid) + " dim=" +
                                                       std::to_string(id.dim) + " iid=" + std::to_string(id.iid) +
                                                       ": " + e.what());
        }
        vectors[i] = features::compute_all(design, fcfg);
    });
    features::FeatureMatrix per_instance;
    for (std::size_t i = 0; i < instances.size(); ++i) per_instance.add(instances[i].id(), vectors[i]);
    const auto aggregated = features::aggregate_median(per_instance);

    nlohmann::json meta;
    meta["schema_version"] = features::kSchemaVersion;
    meta["schema_hash"] = sel::schema_hash(per_instance.names);
    meta["n_features"] = per_instance.names.size();
    meta["n_instances"] = per_instance.rows.size();
    meta["n_problems"] = aggregated.rows.size();
    meta["design_mult"] = c.design_mult;
    meta["seed"] = c.seed;
    nlohmann::json evals;
    for (const auto& r : per_instance.rows) evals[std::to_string(r.key.dim)] = r.cost_evals;
    meta["evals_per_instance_by_dim"] = evals;

    const auto dir = c.out / "features";
    csv::write_atomic(dir / "instances.csv", features::to_csv(per_instance, true));
    csv::write_atomic(dir / "aggregated.csv", features::to_csv(aggregated, false));
    csv::write_atomic(dir / "meta.json", meta.dump(2) + "\n");
}

void cmd_performance(const Config& c) {
    validate(c);
    const auto dir = c.out / "performance";
    std::vector<ingest::RunRecord> records;
    if (c.runs) {
        records = ingest::parse_runs_csv(*c.runs);
        log("performance: " + std::to_string(records.size()) + " run records from " + c.runs->string());
    } else {
        records = ingest::synthetic_runs(problems::suite(c.dims, c.function_ids(), c.iids), c.seed);
        csv::write_atomic(dir / "runs.csv", ingest::runs_to_csv(records));
        log("performance: " + std::to_string(records.size()) + " synthetic run records");
    }
    const std::set<int> iids(c.iids.begin(), c.iids.end());
    records = ingest::first_run_only(ingest::restrict_iids(records, iids));
    const auto sanity = ingest::sanity_check(records, iids);
    csv::write_atomic(dir / "sanity.txt", sanity.to_text());
    csv::write_atomic(dir / "sanity.jsonl", sanity.to_jsonl());
    if (sanity.valid_solvers.empty()) throw DataError("no solver passed the sanity checks; see sanity.txt");
    for (const auto& s : sanity.invalid_solvers) log("warning: solver '" + s + "' excluded by sanity checks");

    const std::vector<std::string> valid(sanity.valid_solvers.begin(), sanity.valid_solvers.end());
    const auto candidates = perf::relert_table(records, valid, c.epsilon);
    for (const auto& k : candidates.dropped) log("warning: problem " + k.label() + " solved by no solver; dropped");
    const auto portfolio = perf::build_portfolio(candidates, c.top_k);
    const auto table = perf::relert_table(records, portfolio.members, c.epsilon);
    for (const auto& k : table.dropped)
        if (std::find(candidates.dropped.begin(), candidates.dropped.end(), k) == candidates.dropped.end())
            log("warning: problem " + k.label() + " solved by no portfolio member; dropped");
    log("performance: portfolio of " + std::to_string(portfolio.members.size()) + " solvers, penalty " +
        csv::format_double(table.penalty));

    csv::write_atomic(dir / "candidates_ert.csv", perf::ert_csv(candidates));
    csv::write_atomic(dir / "candidates_relert.csv", perf::relert_csv(candidates));
    csv::write_atomic(dir / "candidates_meta.json", perf::meta_json(candidates));
    csv::write_atomic(dir / "ert.csv", perf::ert_csv(table));
    csv::write_atomic(dir / "relert.csv", perf::relert_csv(table));
    csv::write_atomic(dir / "meta.json", perf::meta_json(table));
    csv::write_atomic(dir / "portfolio.json", perf::portfolio_json(portfolio));
}

namespace {

struct TrainInputs {
    perf::PerformanceTable table;
    sel::Dataset data;
};

TrainInputs train_inputs(const Config& c) {
    TrainInputs in;
    in.table = load_table(c.out / "performance", "");
    const auto features = features::from_csv(
        read_artifact(c.out / "features" / "aggregated.csv", "run `ela features` first"));
    in.data = sel::align(features, in.table);
    return in;
}

std::string leaderboard_row(std::size_t rank, const std::string& kind, const std::string& label,
                            const std::string& learner, const std::string& paradigm, const std::string& fs,
                            double cost, double nocost, std::size_t n_features, std::size_t fs_evals,
                            const std::string& seed, const std::string& mask, const std::string& status) {
    std::ostringstream out;
    out << rank << ',' << kind << ',' << label << ',' << learner << ',' << paradigm << ',' << fs << ','
        << csv::format_double(cost) << ',' << csv::format_double(nocost) << ',' << n_features << ',' << fs_evals << ','
        << seed << ',' << mask << ',' << status << '\n';
    return out.str();
}

}  // namespace

void cmd_train(const Config& c) {
    validate(c);
    const auto in = train_inputs(c);
    sel::GridOptions opt;
    opt.learners = c.learners;
    opt.paradigms = paradigms_of(c);
    opt.strategies = strategies_of(c);
    opt.design_mult = c.design_mult;
    opt.seed = c.seed;
    opt.ga_generations = c.ga_generations;
    log("train: " + std::to_string(opt.learners.size() * opt.paradigms.size() * opt.strategies.size()) +
        " selector configurations on " + std::to_string(in.table.n_problems()) + " problems");
    const auto entries = sel::grid_search(in.data, in.table, opt);

    // Baselines: per-problem oracle (VBS) and the single best solver; neither
    // needs features, so no sample cost is charged.
    const auto oracle = sel::evaluate_choices(in.table, perf::vbs(in.table).choice, 0.0);
    const auto best_single = perf::sbs(in.table);
    const auto sbs_cv = sel::evaluate_choices(
        in.table, std::vector<Eigen::Index>(static_cast<std::size_t>(in.table.n_problems()), best_single.index), 0.0);

    struct Line {
        bool ok;
        double score;
        int order;
        std::string kind, label, learner, paradigm, fs, seed, mask, status;
        double nocost;
        std::size_t n_features, fs_evals;
    };
    std::vector<Line> lines;
    lines.push_back({true, oracle.mean_relert, 0, "baseline", "oracle", "", "", "", "", "", "ok",
                     oracle.mean_relert_no_cost, 0, 0});
    lines.push_back({true, sbs_cv.mean_relert, 1, "baseline", "sbs:" + best_single.solver, "", "", "", "", "", "ok",
                     sbs_cv.mean_relert_no_cost, 0, 0});
    int order = 2;
    for (const auto& e : entries)
        lines.push_back({e.ok(), e.ok() ? e.cv.mean_relert : kNaN, order++, "selector", e.label(), e.learner,
                         sel::to_string(e.paradigm), sel::to_string(e.strategy), std::to_string(e.seed),
                         e.ok() ? sel::mask_string(e.mask) : "", e.ok() ? "ok" : "error: " + e.error,
                         e.ok() ? e.cv.mean_relert_no_cost : kNaN, e.ok() ? sel::mask_size(e.mask) : 0, e.fs_evaluations});
    std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        if (a.ok != b.ok) return a.ok;
        if (!a.ok) return a.order < b.order;
        return a.score < b.score || (a.score == b.score && a.order < b.order);
    });
    std::string board = "rank,kind,label,learner,paradigm,fs,mean_relert,mean_relert_no_cost,n_features,fs_evaluations,seed,mask,status\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string status = lines[i].status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        board += leaderboard_row(i + 1, lines[i].kind, lines[i].label, lines[i].learner, lines[i].paradigm, lines[i].fs,
                                 lines[i].score, lines[i].nocost, lines[i].n_features, lines[i].fs_evals, lines[i].seed,
                                 lines[i].mask, status);
    }

    const auto dir = c.out / "train";
    csv::write_atomic(dir / "leaderboard.csv", board);

    std::ostringstream all;
    all << "selector,fid,dim,predicted,relert_cost,relert_nocost\n";
    for (const auto& e : entries) {
        if (!e.ok()) continue;
        for (std::size_t p = 0; p < e.cv.problems.size(); ++p)
            all << e.label() << ',' << e.cv.problems[p].fid << ',' << e.cv.problems[p].dim << ',' << e.cv.predicted[p]
                << ',' << csv::format_double(e.cv.relert_cost[p]) << ',' << csv::format_double(e.cv.relert_nocost[p])
                << '\n';
    }
    csv::write_atomic(dir / "cv_all.csv", all.str());

    const auto best = std::find_if(entries.begin(), entries.end(), [](const auto& e) { return e.ok(); });
    if (best == entries.end()) throw DataError("every selector configuration failed; see leaderboard.csv");
    const auto learner = learn::make_learner(best->learner);
    auto model = sel::train(in.data, in.table, best->paradigm, *learner, best->mask, best->seed, c.seed);
    model.label = best->label();
    csv::write_atomic(dir / "best_model.json", model.to_json().dump() + "\n");
    csv::write_atomic(dir / "cv_predictions.csv", best->cv.to_csv());
    log("train: best selector " + best->label() + " with mean relERT " + csv::format_double(best->cv.mean_relert) +
        " (SBS " + best_single.solver + ": " + csv::format_double(best_single.mean_relert) + ")");
}

void cmd_report(const Config& c) {
    validate(c);
    const auto pdir = c.out / "performance";
    const auto table = load_table(pdir, "");
    const auto candidates = load_table(pdir, "candidates_");
    perf::Portfolio portfolio;
    try {
        const auto j = nlohmann::json::parse(read_artifact(pdir / "portfolio.json", "run `ela performance` first"));
        portfolio.members = j.at("members").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("portfolio.json: ") + e.what());
    }

    // Selectors in leaderboard order; Table I shows the two best.
    const auto board = csv::lines(read_artifact(c.out / "train" / "leaderboard.csv", "run `ela train` first"));
    std::vector<std::string> order;
    for (std::size_t i = 1; i < board.size(); ++i) {
        const auto f = csv::split(board[i]);
        if (f.size() >= 13 && f[1] == "selector" && f[12] == "ok") order.push_back(f[2]);
    }
    std::map<std::string, sel::CvResult> cvs;
    const auto all = csv::lines(read_artifact(c.out / "train" / "cv_all.csv", "run `ela train` first"));
    for (std::size_t i = 1; i < all.size(); ++i) {
        const auto f = csv::split(all[i]);
        if (f.size() != 6) throw ParseError(i + 1, "cv_all.csv: expected 6 fields");
        auto& cv = cvs[f[0]];
        const auto fid = csv::parse_int(f[1]), dim = csv::parse_int(f[2]);
        const auto rc = csv::parse_double(f[4]), rn = csv::parse_double(f[5]);
        if (!fid || !dim || !rc || !rn) throw ParseError(i + 1, "cv_all.csv: malformed row");
        cv.problems.push_back({static_cast<int>(*fid), static_cast<int>(*dim)});
        cv.predicted.push_back(f[3]);
        cv.relert_cost.push_back(*rc);
        cv.relert_nocost.push_back(*rn);
    }
    std::vector<report::SelectorResult> selectors;
    for (const auto& name : order) {
        if (selectors.size() == 2) break;
        auto it = cvs.find(name);
        if (it == cvs.end()) throw DataError("cv_all.csv has no predictions for " + name);
        selectors.push_back({name, it->second});
    }

    const auto dir = c.out / "report";
    csv::write_atomic(dir / "table1.csv", report::table_one_csv(table, selectors));
    csv::write_atomic(dir / "scatter.csv", report::scatter_csv(table, selectors));
    csv::write_atomic(dir / "scatter.svg", report::scatter_svg(table, selectors));
    csv::write_atomic(dir / "ratios.csv", report::ratio_csv(candidates, portfolio));
    csv::write_atomic(dir / "ratios.svg", report::ratio_svg(candidates, portfolio));
    if (!selectors.empty())
        csv::write_atomic(dir / "confusion.csv",
                          report::confusion_csv(table, sel::label_indices(table, c.seed), selectors.front().cv));
}

void run_all(const Config& c) {
    cmd_features(c);
    cmd_performance(c);
    cmd_train(c);
    cmd_report(c);
}

}  // namespace ela::pipeline
