#include "ela/performance.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "ela/csv.hpp"

namespace ela::perf {

using ingest::RunRecord;

bool success(const RunRecord& record, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    return record.best_gap <= epsilon;
}

std::optional<double> ert(std::span<const RunRecord> records, double epsilon) {
    if (records.empty()) throw InvalidArgument("ERT needs at least one run");
    double evals = 0.0;
    int successes = 0;
    for (const auto& r : records) {
        evals += static_cast<double>(r.fe_count);
        if (success(r, epsilon)) ++successes;
    }
    if (successes == 0) return std::nullopt;
    return evals / successes;
}

double PerformanceTable::best_ert(Eigen::Index p) const { return ert.col(p).minCoeff(); }

Eigen::Index PerformanceTable::solver_index(const std::string& solver) const {
    auto it = std::find(solvers.begin(), solvers.end(), solver);
    return it == solvers.end() ? -1 : static_cast<Eigen::Index>(it - solvers.begin());
}

Eigen::Index PerformanceTable::problem_index(const FunctionKey& key) const {
    auto it = std::find(problems.begin(), problems.end(), key);
    return it == problems.end() ? -1 : static_cast<Eigen::Index>(it - problems.begin());
}

PerformanceTable table_from_ert(std::vector<std::string> solvers, std::vector<FunctionKey> problems,
                                 const Eigen::MatrixXd& ert, double epsilon) {
    if (ert.rows() != static_cast<Eigen::Index>(solvers.size()) || ert.cols() != static_cast<Eigen::Index>(problems.size()))
        throw InvalidArgument("ERT matrix shape does not match solvers x problems");
    PerformanceTable t;
    t.solvers = std::move(solvers);
    t.epsilon = epsilon;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index p = 0; p < ert.cols(); ++p) {
        if (std::isfinite(ert.col(p).minCoeff())) kept.push_back(p);
        else t.dropped.push_back(problems[static_cast<std::size_t>(p)]);
    }
    const auto ns = static_cast<Eigen::Index>(t.solvers.size());
    const auto np = static_cast<Eigen::Index>(kept.size());
    t.ert.resize(ns, np);
    t.relert.resize(ns, np);
    double max_finite = 0.0;
    for (Eigen::Index j = 0; j < np; ++j) {
        const Eigen::Index p = kept[static_cast<std::size_t>(j)];
        t.problems.push_back(problems[static_cast<std::size_t>(p)]);
        t.ert.col(j) = ert.col(p);
        const double best = ert.col(p).minCoeff();
        for (Eigen::Index s = 0; s < ns; ++s) {
            const double e = ert(s, p);
            t.relert(s, j) = std::isfinite(e) ? e / best : kInf;
            if (std::isfinite(e)) max_finite = std::max(max_finite, t.relert(s, j));
        }
    }
    t.penalty = np > 0 ? kPenaltyFactor * max_finite : kNaN;
    for (Eigen::Index j = 0; j < np; ++j)
        for (Eigen::Index s = 0; s < ns; ++s)
            if (!std::isfinite(t.relert(s, j))) t.relert(s, j) = t.penalty;
    return t;
}

PerformanceTable relert_table(const std::vector<RunRecord>& records, std::vector<std::string> solvers, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    if (solvers.empty()) {
        std::set<std::string> all;
        for (const auto& r : records) all.insert(r.solver);
        solvers.assign(all.begin(), all.end());
    }
    std::map<std::string, Eigen::Index> sidx;
    for (std::size_t s = 0; s < solvers.size(); ++s) sidx[solvers[s]] = static_cast<Eigen::Index>(s);

    std::map<std::pair<Eigen::Index, FunctionKey>, std::vector<RunRecord>> groups;
    std::set<FunctionKey> keys;
    for (const auto& r : records) {
        auto it = sidx.find(r.solver);
        if (it == sidx.end()) continue;
        groups[{it->second, r.function()}].push_back(r);
        keys.insert(r.function());
    }
    std::vector<FunctionKey> problems(keys.begin(), keys.end());
    Eigen::MatrixXd e(static_cast<Eigen::Index>(solvers.size()), static_cast<Eigen::Index>(problems.size()));
    for (std::size_t s = 0; s < solvers.size(); ++s)
        for (std::size_t p = 0; p < problems.size(); ++p) {
            auto it = groups.find({static_cast<Eigen::Index>(s), problems[p]});
            if (it == groups.end())
                throw InvalidArgument("solver '" + solvers[s] + "' has no runs on problem " + problems[p].label());
            const auto v = ert(it->second, epsilon);
            e(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(p)) = v ? *v : kInf;
        }
    return table_from_ert(std::move(solvers), std::move(problems), e, epsilon);
}

BaselineChoice vbs(const PerformanceTable& table) {
    BaselineChoice out;
    double sum = 0.0;
    for (Eigen::Index p = 0; p < table.n_problems(); ++p) {
        Eigen::Index best = 0;
        for (Eigen::Index s = 1; s < table.n_solvers(); ++s)
            if (table.relert(s, p) < table.relert(best, p)) best = s;
        out.choice.push_back(best);
        sum += table.relert(best, p);
    }
    out.mean_relert = table.n_problems() ? sum / static_cast<double>(table.n_problems()) : kNaN;
    return out;
}

Eigen::VectorXd mean_relert(const PerformanceTable& table) { return table.relert.rowwise().mean(); }

SingleBest sbs(const PerformanceTable& table) {
    if (table.n_solvers() == 0 || table.n_problems() == 0) throw InvalidArgument("empty performance table");
    const Eigen::VectorXd means = mean_relert(table);
    Eigen::Index best = 0;
    for (Eigen::Index s = 1; s < means.size(); ++s)
        if (means[s] < means[best]) best = s;
    return {table.solvers[static_cast<std::size_t>(best)], best, means[best]};
}

double sbs_per_fold_mean(const PerformanceTable& table) {
    const Eigen::Index np = table.n_problems();
    if (np < 2) throw InvalidArgument("per-fold SBS needs at least two problems");
    const Eigen::VectorXd totals = table.relert.rowwise().sum();
    double sum = 0.0;
    for (Eigen::Index p = 0; p < np; ++p) {
        Eigen::Index best = 0;
        double best_mean = kInf;
        for (Eigen::Index s = 0; s < table.n_solvers(); ++s) {
            const double m = (totals[s] - table.relert(s, p)) / static_cast<double>(np - 1);
            if (m < best_mean) best_mean = m, best = s;
        }
        sum += table.relert(best, p);
    }
    return sum / static_cast<double>(np);
}

std::vector<int> competition_ranks(const Eigen::VectorXd& col) {
    std::vector<int> ranks(static_cast<std::size_t>(col.size()), 0);
    for (Eigen::Index s = 0; s < col.size(); ++s) {
        if (!std::isfinite(col[s])) continue;
        int better = 0;
        for (Eigen::Index o = 0; o < col.size(); ++o)
            if (std::isfinite(col[o]) && col[o] < col[s]) ++better;
        ranks[static_cast<std::size_t>(s)] = better + 1;
    }
    return ranks;
}

Portfolio build_portfolio(const PerformanceTable& table, int top_k) {
    if (top_k < 1) throw InvalidArgument("top_k must be positive");
    Portfolio pf;
    for (Eigen::Index p = 0; p < table.n_problems(); ++p) {
        auto& set = pf.per_dim_sets[table.problems[static_cast<std::size_t>(p)].dim];
        const auto ranks = competition_ranks(table.ert.col(p));
        for (std::size_t s = 0; s < ranks.size(); ++s)
            if (ranks[s] >= 1 && ranks[s] <= top_k) set.insert(table.solvers[s]);
    }
    std::set<std::string> common;
    bool first = true;
    for (const auto& [dim, set] : pf.per_dim_sets) {
        if (first) {
            common = set;
            first = false;
            continue;
        }
        std::set<std::string> next;
        std::set_intersection(common.begin(), common.end(), set.begin(), set.end(), std::inserter(next, next.begin()));
        common = std::move(next);
    }
    if (common.empty()) {
        std::ostringstream msg;
        msg << "portfolio is empty; per-dimension top-" << top_k << " sets:";
        for (const auto& [dim, set] : pf.per_dim_sets) msg << ' ' << dim << "D=" << set.size();
        throw EmptyPortfolio(msg.str(), pf.per_dim_sets);
    }

    const Eigen::VectorXd means = mean_relert(table);
    std::vector<Eigen::Index> idx;
    for (const auto& s : common) idx.push_back(table.solver_index(s));
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        return means[a] < means[b] || (means[a] == means[b] && a < b);
    });
    for (auto i : idx) pf.members.push_back(table.solvers[static_cast<std::size_t>(i)]);

    for (Eigen::Index p = 0; p < table.n_problems(); ++p) {
        Eigen::Index best = -1;
        for (auto i : idx)
            if (best < 0 || table.ert(i, p) < table.ert(best, p)) best = i;
        pf.best_per_problem[table.problems[static_cast<std::size_t>(p)]] = table.solvers[static_cast<std::size_t>(best)];
    }
    return pf;
}

namespace {

std::string matrix_csv(const PerformanceTable& t, const Eigen::MatrixXd& m) {
    std::ostringstream out;
    out << "solver";
    for (const auto& p : t.problems) out << ',' << p.label();
    out << '\n';
    for (Eigen::Index s = 0; s < t.n_solvers(); ++s) {
        out << t.solvers[static_cast<std::size_t>(s)];
        for (Eigen::Index p = 0; p < t.n_problems(); ++p) out << ',' << csv::format_double(m(s, p));
        out << '\n';
    }
    return out.str();
}

FunctionKey parse_key(const std::string& label, std::size_t line) {
    const auto colon = label.find(':');
    if (colon == std::string::npos) throw ParseError(line, "bad problem key '" + label + "'");
    auto fid = csv::parse_int(std::string_view(label).substr(0, colon));
    auto dim = csv::parse_int(std::string_view(label).substr(colon + 1));
    if (!fid || !dim) throw ParseError(line, "bad problem key '" + label + "'");
    return {static_cast<int>(*fid), static_cast<int>(*dim)};
}

void read_matrix(const std::string& text, std::vector<std::string>& solvers, std::vector<FunctionKey>& problems,
                 Eigen::MatrixXd& m) {
    const auto rows = csv::lines(text);
    if (rows.empty()) throw ParseError(1, "missing header");
    const auto header = csv::split(rows[0]);
    if (header.empty() || header[0] != "solver") throw ParseError(1, "expected 'solver' as first column");
    problems.clear();
    for (std::size_t c = 1; c < header.size(); ++c) problems.push_back(parse_key(header[c], 1));
    solvers.clear();
    std::vector<std::vector<double>> vals;
    for (std::size_t li = 1; li < rows.size(); ++li) {
        if (rows[li].empty()) continue;
        const auto f = csv::split(rows[li]);
        if (f.size() != header.size()) throw ParseError(li + 1, "wrong number of fields");
        solvers.push_back(f[0]);
        std::vector<double> row;
        for (std::size_t c = 1; c < f.size(); ++c) {
            auto v = csv::parse_double(f[c]);
            if (!v) throw ParseError(li + 1, "not a number: '" + f[c] + "'");
            row.push_back(*v);
        }
        vals.push_back(std::move(row));
    }
    m.resize(static_cast<Eigen::Index>(solvers.size()), static_cast<Eigen::Index>(problems.size()));
    for (std::size_t s = 0; s < vals.size(); ++s)
        for (std::size_t p = 0; p < problems.size(); ++p)
            m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(p)) = vals[s][p];
}

}  // namespace

std::string ert_csv(const PerformanceTable& table) { return matrix_csv(table, table.ert); }
std::string relert_csv(const PerformanceTable& table) { return matrix_csv(table, table.relert); }

std::string meta_json(const PerformanceTable& table) {
    nlohmann::ordered_json j;
    j["epsilon"] = table.epsilon;
    j["penalty"] = table.penalty;
    j["penalty_factor"] = kPenaltyFactor;
    j["solvers"] = table.solvers;
    auto dropped = nlohmann::ordered_json::array();
    for (const auto& k : table.dropped) dropped.push_back(k.label());
    j["dropped"] = dropped;
    return j.dump(2) + "\n";
}

std::string portfolio_json(const Portfolio& pf) {
    nlohmann::ordered_json j;
    j["members"] = pf.members;
    nlohmann::ordered_json per_dim;
    for (const auto& [dim, set] : pf.per_dim_sets) per_dim[std::to_string(dim)] = std::vector<std::string>(set.begin(), set.end());
    j["per_dim_sets"] = per_dim;
    nlohmann::ordered_json best;
    for (const auto& [key, s] : pf.best_per_problem) best[key.label()] = s;
    j["best_per_problem"] = best;
    return j.dump(2) + "\n";
}

PerformanceTable table_from_files(const std::string& ert_text, const std::string& relert_text,
                                  const std::string& meta_text) {
    PerformanceTable t;
    std::vector<std::string> s2;
    std::vector<FunctionKey> p2;
    read_matrix(ert_text, t.solvers, t.problems, t.ert);
    read_matrix(relert_text, s2, p2, t.relert);
    if (s2 != t.solvers || p2 != t.problems) throw SchemaMismatch("ert.csv and relert.csv disagree on solvers or problems");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(meta_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("performance metadata: ") + e.what());
    }
    t.epsilon = j.value("epsilon", kDefaultEpsilon);
    t.penalty = j.value("penalty", kNaN);
    for (const auto& d : j.value("dropped", std::vector<std::string>{})) t.dropped.push_back(parse_key(d, 1));
    return t;
}

}  // namespace ela::perf
