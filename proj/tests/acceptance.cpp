// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "ela/csv.hpp"
#include "ela/feature_selection.hpp"
#include "ela/features.hpp"
#include "ela/ingest.hpp"
#include "ela/learners.hpp"
#include "ela/performance.hpp"
#include "ela/problems.hpp"
#include "ela/report.hpp"
#include "ela/rng.hpp"
#include "ela/sampling.hpp"
#include "ela/selection.hpp"

using namespace ela;
namespace fsys = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    std::ostringstream why;
    bool ok = true;

    void expect(bool cond, const std::string& msg) {
        if (!cond && ok) why << msg;
        ok = ok && cond;
    }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream line;
    line << (c.ok ? "[PASS] " : "[FAIL] ") << id << ". " << title << " (" << std::fixed;
    line.precision(2);
    line << secs << " s)";
    if (!c.ok) line << ": " << c.why.str();
    std::cout << line.str() << std::endl;
    failures += c.ok ? 0 : 1;
}

std::string fnv_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
    std::ostringstream o;
    o << std::hex << h;
    return o.str();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool same_or_both_nan(double a, double b, double tol) {
    return (std::isnan(a) && std::isnan(b)) || close(a, b, tol);
}

// ---------------------------------------------------------------------------

void fid4(Check& c) {
    const auto t0 = Clock::now();
    const auto recs = ingest::parse_runs_csv(fsys::path(ELA_TEST_DATA) / "fid4_runs.csv");
    const auto t = perf::relert_table(recs);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const double ert[] = {405.2, 387784.5, 25197.0, 4286.6};
    const double vbs[] = {98.8, 219.6, 486.2, 1067.8};
    const double rel[] = {4.1, 1765.9, 51.8, 4.0};
    const auto h = t.solver_index("HCMA");
    c.expect(h >= 0 && t.n_problems() == 4, "unexpected table shape");
    for (Eigen::Index p = 0; p < 4 && c.ok; ++p) {
        c.expect(close(t.ert(h, p), ert[p], 0.05), "ERT dim " + std::to_string(t.problems[static_cast<std::size_t>(p)].dim));
        c.expect(close(t.best_ert(p), vbs[p], 0.05), "VBS ERT");
        c.expect(close(t.relert(h, p), rel[p], 0.05), "relERT dim " + std::to_string(t.problems[static_cast<std::size_t>(p)].dim));
    }
    c.expect(secs < 1.0, "slower than 1 s");
}

void ert_oracle(Check& c) {
    Rng rng(2024);
    int undefined = 0;
    for (int g = 0; g < 1000; ++g) {
        const int runs = 1 + static_cast<int>(rng.below(15));
        const double eps = std::pow(10.0, -static_cast<double>(rng.below(8)));
        std::vector<ingest::RunRecord> recs;
        long long fe_sum = 0, succ = 0;
        for (int r = 0; r < runs; ++r) {
            ingest::RunRecord rec{"s", 1, 2, r + 1, 1, 1 + static_cast<std::int64_t>(rng.below(1000000)),
                                  rng.bernoulli(0.5) ? eps * rng.uniform() : eps * (1.0 + 10 * rng.uniform()), false};
            if (rng.bernoulli(0.1)) rec.best_gap = eps;
            fe_sum += rec.fe_count;
            succ += rec.best_gap <= eps ? 1 : 0;
            recs.push_back(rec);
        }
        const auto e = perf::ert(recs, eps);
        if (succ == 0) {
            ++undefined;
            c.expect(!e.has_value(), "defined ERT without successes in group " + std::to_string(g));
        } else {
            c.expect(e.has_value() && *e == static_cast<double>(fe_sum) / static_cast<double>(succ),
                     "mismatch in group " + std::to_string(g));
        }
    }
    c.expect(undefined > 0, "no undefined group generated");
}

void axioms(Check& c) {
    Rng rng(77);
    for (int t = 0; t < 300; ++t) {
        const auto ns = 1 + static_cast<Eigen::Index>(rng.below(12));
        const auto np = 1 + static_cast<Eigen::Index>(rng.below(30));
        Eigen::MatrixXd e(ns, np);
        std::vector<FunctionKey> probs;
        for (Eigen::Index p = 0; p < np; ++p) probs.push_back({1 + static_cast<int>(p % 24), 2 + static_cast<int>(p / 24)});
        for (Eigen::Index i = 0; i < e.size(); ++i)
            e.data()[i] = rng.bernoulli(0.2) ? std::numeric_limits<double>::infinity() : std::pow(10.0, rng.uniform(0, 6));
        std::vector<std::string> solvers;
        for (Eigen::Index s = 0; s < ns; ++s) solvers.push_back("s" + std::to_string(s));
        const auto table = perf::table_from_ert(solvers, probs, e, 1e-2);
        if (table.n_problems() == 0) continue;
        c.expect(perf::vbs(table).mean_relert == 1.0, "VBS mean differs from 1");
        double max_finite = 0;
        for (Eigen::Index p = 0; p < e.cols(); ++p) {
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index s = 0; s < ns; ++s) best = std::min(best, e(s, p));
            if (!std::isfinite(best)) continue;
            for (Eigen::Index s = 0; s < ns; ++s)
                if (std::isfinite(e(s, p))) max_finite = std::max(max_finite, e(s, p) / best);
        }
        c.expect(table.penalty == 10.0 * max_finite, "penalty is not 10x the largest finite relERT");
        for (Eigen::Index s = 0; s < table.n_solvers(); ++s)
            for (Eigen::Index p = 0; p < table.n_problems(); ++p)
                if (!table.imputed(s, p)) c.expect(table.relert(s, p) >= 1.0, "finite relERT below 1");
    }
}

sampling::SampleDesign random_design(Rng& rng, std::uint64_t seed, std::int64_t* counter = nullptr) {
    const auto& fids = problems::implemented_fids();
    const int dim = std::vector<int>{2, 3, 5}[rng.below(3)];
    const auto inst = problems::make_instance(fids[rng.below(fids.size())], dim, 1 + static_cast<int>(rng.below(5)));
    auto d = sampling::improved_lhd(50 * dim, inst.domain(), seed);
    return sampling::evaluate_design(std::move(d), [&, inst](const Eigen::VectorXd& x) {
        if (counter) ++*counter;
        return inst(x);
    });
}

void compare(Check& c, const features::FeatureVector& a, const features::FeatureVector& b,
             const std::vector<std::string>& names, double tol, const std::string& what) {
    for (const auto& n : names)
        c.expect(same_or_both_nan(a.at(n), b.at(n), tol), what + ": " + n + " " + csv::format_double(a.at(n)) + " vs " +
                                                                 csv::format_double(b.at(n)));
}

std::vector<std::string> names_with_prefix(const features::FeatureVector& v, const std::string& prefix) {
    std::vector<std::string> out;
    for (const auto& n : v.names)
        if (n.rfind(prefix, 0) == 0) out.push_back(n);
    return out;
}

void invariances(Check& c) {
    Rng rng(4);
    constexpr double tol = 1e-10;
    for (int k = 0; k < 50; ++k) {
        const auto d = random_design(rng, 1000 + static_cast<std::uint64_t>(k));
        const int dim = d.dim();

        // Translation with an identically shifted domain.
        Eigen::VectorXd off(dim);
        for (int j = 0; j < dim; ++j) off[j] = rng.uniform(-3, 3);
        auto t = d;
        t.points.rowwise() += off.transpose();
        t.domain = d.domain.shifted(off);
        const auto pca_cor = std::vector<std::string>{"pca.expl_var.cor_x", "pca.expl_var.cor_init",
                                                      "pca.expl_var_PC1.cor_x", "pca.expl_var_PC1.cor_init"};
        const auto da = features::dispersion(d), ta = features::dispersion(t);
        compare(c, da, ta, da.names, tol, "translation disp");
        const auto na = features::nbc(d), nt = features::nbc(t);
        compare(c, na, nt, na.names, tol, "translation nbc");
        const auto ia = features::information_content(d), it = features::information_content(t);
        compare(c, ia, it, ia.names, tol, "translation ic");
        compare(c, features::pca(d), features::pca(t), pca_cor, tol, "translation pca");

        // Isotropic scaling of x.
        const double s = rng.uniform(0.1, 10.0);
        auto sc = d;
        sc.points *= s;
        sc.domain = sampling::BoxDomain(d.domain.lower() * s, d.domain.upper() * s);
        compare(c, na, features::nbc(sc), {"nbc.nn_nb.sd_ratio", "nbc.nn_nb.mean_ratio", "nbc.nn_nb.cor", "nbc.nb_fitness.cor"},
                tol, "scaling nbc");

        // y-affine.
        const double a = rng.uniform(0.1, 10.0), b = rng.uniform(-100, 100);
        auto pos = d, neg = d;
        pos.values = Eigen::VectorXd((a * d.y().array() + b).matrix());
        neg.values = Eigen::VectorXd((-a * d.y().array() + b).matrix());
        const auto ya = features::ela_distribution(d), yp = features::ela_distribution(pos), yn = features::ela_distribution(neg);
        compare(c, ya, yp, {"ela_distr.skewness", "ela_distr.kurtosis"}, tol, "y-affine");
        c.expect(same_or_both_nan(ya.at("ela_distr.skewness"), -yn.at("ela_distr.skewness"), tol), "negated skewness");
        c.expect(same_or_both_nan(ya.at("ela_distr.kurtosis"), yn.at("ela_distr.kurtosis"), tol), "kurtosis under a < 0");

        // Monotone transform of y: levelset identical.
        auto m = d;
        const double shift = -d.y().minCoeff() + 1.0;
        m.values = Eigen::VectorXd((d.y().array() + shift).log().matrix() * 3.0);
        const auto la = features::ela_levelset(d), lm = features::ela_levelset(m);
        for (std::size_t i = 0; i < la.size(); ++i)
            c.expect(la.values[i] == lm.values[i] || (std::isnan(la.values[i]) && std::isnan(lm.values[i])),
                     "monotone levelset " + la.names[i]);

        // Ranges.
        c.expect(ia.at("ic.h_max") >= 0.0 && ia.at("ic.h_max") <= 1.0, "h_max outside [0, 1]");
        const auto cm = features::cm_angle(d);
        const double ang = cm.at("cm_angle.angle.mean");
        c.expect(std::isnan(ang) || (ang >= 0.0 && ang <= 180.0), "cm angle outside [0, 180]");

        // Evaluation count.
        std::int64_t calls = 0;
        Rng local(static_cast<std::uint64_t>(k));
        const auto counted = random_design(local, 5000 + static_cast<std::uint64_t>(k), &calls);
        const auto all = features::compute_all(counted);
        c.expect(calls == 50 * counted.dim() && all.cost_evals == calls, "objective calls differ from 50 d");
        if (!c.ok) return;
    }
}

// ---------------------------------------------------------------------------
// The constructed scenario shared by criteria 5 to 7.

struct Scenario {
    perf::PerformanceTable table;
    sel::Dataset data;
};

Scenario complementary_scenario() {
    const std::vector<int> dims{2, 3, 5, 10};
    const auto instances = problems::suite(dims, problems::implemented_fids(), {1, 2, 3, 4, 5});
    features::FeatureMatrix fm;
    for (const auto& inst : instances) {
        const auto& id = inst.id();
        auto d = sampling::improved_lhd(50 * id.dim, inst.domain(),
                                        derive_seed(1, {static_cast<std::uint64_t>(id.fid), static_cast<std::uint64_t>(id.dim),
                                                        static_cast<std::uint64_t>(id.iid)}));
        fm.add(id, features::compute_all(sampling::evaluate_design(std::move(d), inst.objective())));
    }
    const auto agg = features::aggregate_median(fm);

    Rng rng(55);
    std::vector<FunctionKey> probs;
    for (const auto& r : agg.rows) probs.push_back({r.key.fid, r.key.dim});
    Eigen::MatrixXd e(3, static_cast<Eigen::Index>(probs.size()));
    for (Eigen::Index p = 0; p < e.cols(); ++p) {
        const auto& k = probs[static_cast<std::size_t>(p)];
        const double base = 2000.0 * k.dim * rng.uniform(1.0, 3.0);
        const bool multi = problems::is_multimodal(k.fid);
        // A: unimodal specialist, B: multimodal specialist, C: generalist.
        e(0, p) = multi ? (rng.bernoulli(0.3) ? std::numeric_limits<double>::infinity() : base * rng.uniform(20, 60)) : base;
        e(1, p) = multi ? base : base * rng.uniform(20, 60);
        e(2, p) = base * rng.uniform(3, 6);
    }
    Scenario s;
    s.table = perf::table_from_ert({"A", "B", "C"}, probs, e, 1e-2);
    s.data = sel::align(agg, s.table);
    return s;
}

void beats_sbs(Check& c, const Scenario& s) {
    const auto t0 = Clock::now();
    const learn::RandomForest rf;
    const auto cv = sel::lofo_cv(s.data, s.table, sel::Paradigm::classification, rf, sel::full_mask(s.data.names.size()), {});
    const auto sbs = perf::sbs(s.table);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream msg;
    msg << "selector " << cv.mean_relert << " vs SBS " << sbs.solver << ' ' << sbs.mean_relert;
    c.expect(cv.mean_relert < sbs.mean_relert, msg.str());
    c.expect(cv.mean_relert <= 0.8 * sbs.mean_relert, "margin below 20%: " + msg.str());
    c.expect(secs < 120.0, "slower than 2 min");
    std::cout << "       " << msg.str() << std::endl;
}

void fs_contracts(Check& c, const Scenario& s) {
    const learn::DecisionTree cart;
    const auto score = fs::cv_scorer(s.data, s.table, sel::Paradigm::classification, cart, {});
    const auto p = s.data.names.size();

    const auto fwd = fs::sffs(p, score);
    for (std::size_t i = 1; i < fwd.steps.size(); ++i) c.expect(fwd.steps[i].score < fwd.steps[i - 1].score, "sffs log not strictly improving");

    const auto bwd = fs::sfbs(p, score);
    for (std::size_t i = 1; i < bwd.steps.size(); ++i) {
        const auto& a = bwd.steps[i - 1];
        const auto& b = bwd.steps[i];
        c.expect(b.score < a.score || (b.score == a.score && sel::mask_size(b.mask) < sel::mask_size(a.mask)),
                 "sfbs log not improving");
    }

    for (int lambda : {5, 50}) {
        fs::GaOptions opt;
        opt.lambda = lambda;
        opt.seed = 17;
        std::size_t calls = 0;
        const auto counted = [&](const sel::Mask& m) {
            ++calls;
            return score(m);
        };
        const auto a = fs::ga(p, counted, opt);
        const std::size_t first_calls = calls;
        const auto b = fs::ga(p, counted, opt);
        const auto budget = static_cast<std::size_t>(10 + lambda * 100);
        c.expect(first_calls <= budget && a.evaluations == first_calls, "GA budget exceeded for lambda " + std::to_string(lambda));
        c.expect(a.mask == b.mask && a.best_per_generation == b.best_per_generation && a.evaluations == b.evaluations &&
                     calls == 2 * first_calls,
                 "GA not reproducible for lambda " + std::to_string(lambda));
    }
}

void leakage(Check& c, const Scenario& s) {
    const auto mask = sel::full_mask(s.data.names.size());
    const auto n = s.table.n_problems();
    for (const auto& id : learn::learner_ids()) {
        const auto learner = learn::make_learner(id);
        for (auto par : {sel::Paradigm::classification, sel::Paradigm::regression, sel::Paradigm::pairwise}) {
            // Every fold for the forest classifier, a spread of folds otherwise.
            const Eigen::Index step = id == "rf" && par == sel::Paradigm::classification ? 1 : 7;
            for (Eigen::Index fold = 0; fold < n; fold += step) {
                const auto clean = fnv_hex(sel::fold_model(s.data, s.table, fold, par, *learner, mask, 1, 1).to_json().dump());
                auto data = s.data;
                auto table = s.table;
                data.x.row(fold).setConstant(-1.234e300);
                table.relert.col(fold).setConstant(9.87e299);
                table.ert.col(fold).setConstant(1.0);
                const auto dirty = fnv_hex(sel::fold_model(data, table, fold, par, *learner, mask, 1, 1).to_json().dump());
                c.expect(clean == dirty, id + "/" + sel::to_string(par) + " fold " + std::to_string(fold) + " changed");
            }
        }
    }
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + ELA_CLI + "\" " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void end_to_end(Check& c) {
    const auto root = fsys::temp_directory_path() / ("ela_acceptance_" + std::to_string(::getpid()));
    fsys::remove_all(root);
    const auto t0 = Clock::now();
    c.expect(run_cli("run-all --out " + (root / "a").string()) == 0, "first run-all failed");
    const double first = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(run_cli("run-all --out " + (root / "b").string()) == 0, "second run-all failed");
    if (!c.ok) return;
    std::size_t files = 0;
    for (const auto& e : fsys::recursive_directory_iterator(root / "a")) {
        if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
        const auto rel = fsys::relative(e.path(), root / "a");
        c.expect(fsys::exists(root / "b" / rel), "missing " + rel.string());
        if (c.ok) c.expect(csv::read_file(e.path()) == csv::read_file(root / "b" / rel), "differs: " + rel.string());
        ++files;
    }
    c.expect(files >= 10, "too few CSV artifacts");
    c.expect(first < 600.0, "run-all slower than 10 min");
    std::cout << "       " << files << " CSV artifacts identical; one run took " << first << " s" << std::endl;
    fsys::remove_all(root);
}

}  // namespace

int main() {
    criterion(1, "FID-4 oracle reproduction", fid4);
    criterion(2, "ERT brute-force equivalence", ert_oracle);
    criterion(3, "VBS/SBS axioms", axioms);
    criterion(4, "Feature invariance suite", invariances);

    std::optional<Scenario> scenario;
    const auto build = [&]() -> const Scenario& {
        if (!scenario) scenario = complementary_scenario();
        return *scenario;
    };
    criterion(5, "Selector beats SBS on a complementary scenario", [&](Check& c) { beats_sbs(c, build()); });
    criterion(6, "Feature-selection contracts", [&](Check& c) { fs_contracts(c, build()); });
    criterion(7, "LOFO leakage test", [&](Check& c) { leakage(c, build()); });

    if (const char* archive = std::getenv("ELA_ARCHIVE_CSV")) {
        criterion(8, "SBS figure from a supplied archive", [&](Check& c) {
            auto recs = ingest::first_run_only(ingest::restrict_iids(ingest::parse_runs_csv(archive), {1, 2, 3, 4, 5}));
            const auto sanity = ingest::sanity_check(recs);
            const std::vector<std::string> valid(sanity.valid_solvers.begin(), sanity.valid_solvers.end());
            const auto candidates = perf::relert_table(recs, valid);
            const auto pf = perf::build_portfolio(candidates, 3);
            const auto table = perf::relert_table(recs, pf.members);
            const auto sbs = perf::sbs(table);
            std::cout << "       SBS " << sbs.solver << ' ' << sbs.mean_relert << "\n"
                      << report::table_one_csv(table, {});
            c.expect(close(sbs.mean_relert, 30.37, 0.05), "SBS mean " + std::to_string(sbs.mean_relert));
        });
    } else {
        std::cout << "[SKIP] 8. SBS figure from a supplied archive: ELA_ARCHIVE_CSV not set; the COCO archive is not shipped" << std::endl;
    }
    criterion(9, "End-to-end determinism of run-all", end_to_end);

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
