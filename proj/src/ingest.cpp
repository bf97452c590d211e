#include "ela/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "ela/csv.hpp"

namespace ela::ingest {

namespace {

using RecordKey = std::tuple<std::string, int, int, int, int>;

RecordKey key_of(const RunRecord& r) { return {r.solver, r.fid, r.dim, r.iid, r.run}; }

}  // namespace

std::vector<RunRecord> parse_runs_text(const std::string& text) {
    const auto rows = csv::lines(text);
    if (rows.empty()) throw ParseError(1, std::string("missing header '") + kRunsHeader + "'");
    const bool extended = rows[0] == std::string(kRunsHeader) + ",budget_exhausted";
    if (rows[0] != kRunsHeader && !extended)
        throw ParseError(1, "unexpected header '" + rows[0] + "', expected '" + kRunsHeader + "'");
    const std::size_t width = extended ? 8 : 7;

    std::vector<RunRecord> out;
    std::map<RecordKey, std::size_t> seen;
    for (std::size_t li = 1; li < rows.size(); ++li) {
        const std::size_t line = li + 1;
        if (rows[li].empty()) continue;
        const auto f = csv::split(rows[li]);
        if (f.size() != width)
            throw ParseError(line, "expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()));
        RunRecord r;
        r.solver = f[0];
        if (r.solver.empty()) throw ParseError(line, "empty solver id");
        auto as_int = [&](std::size_t i, const char* what) {
            auto v = csv::parse_int(f[i]);
            if (!v) throw ParseError(line, std::string("field '") + what + "' is not an integer: '" + f[i] + "'");
            return *v;
        };
        r.fid = static_cast<int>(as_int(1, "fid"));
        r.dim = static_cast<int>(as_int(2, "dim"));
        r.iid = static_cast<int>(as_int(3, "iid"));
        r.run = static_cast<int>(as_int(4, "run"));
        r.fe_count = as_int(5, "fe_count");
        if (r.fid <= 0 || r.dim <= 0 || r.iid <= 0) throw ParseError(line, "fid, dim and iid must be positive");
        if (r.fe_count < 1) throw ParseError(line, "fe_count must be at least 1");
        auto gap = csv::parse_double(f[6]);
        if (!gap || f[6].empty() || std::isnan(*gap) || *gap < 0.0)
            throw ParseError(line, "best_gap must be a non-negative number: '" + f[6] + "'");
        r.best_gap = *gap;
        if (extended) {
            if (f[7] != "0" && f[7] != "1") throw ParseError(line, "budget_exhausted must be 0 or 1");
            r.budget_exhausted = f[7] == "1";
        }
        if (auto [it, inserted] = seen.emplace(key_of(r), line); !inserted)
            throw DuplicateRecord(line, "duplicate record for solver '" + r.solver + "' (first seen on line " +
                                            std::to_string(it->second) + ")");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RunRecord> parse_runs_csv(const std::filesystem::path& path) { return parse_runs_text(csv::read_file(path)); }

std::string runs_to_csv(const std::vector<RunRecord>& records) {
    const bool extended = std::any_of(records.begin(), records.end(), [](const auto& r) { return r.budget_exhausted; });
    std::ostringstream out;
    out << kRunsHeader << (extended ? ",budget_exhausted" : "") << '\n';
    for (const auto& r : records) {
        out << r.solver << ',' << r.fid << ',' << r.dim << ',' << r.iid << ',' << r.run << ',' << r.fe_count << ','
            << csv::format_double(r.best_gap);
        if (extended) out << ',' << (r.budget_exhausted ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

std::string to_string(IssueKind kind) {
    switch (kind) {
        case IssueKind::missing_instance: return "missing_instance";
        case IssueKind::duplicate_run: return "duplicate_run";
        case IssueKind::non_positive_fe: return "non_positive_fe";
    }
    return "unknown";
}

SanityReport sanity_check(const std::vector<RunRecord>& records, const std::set<int>& required_iids) {
    std::map<std::string, std::map<FunctionKey, std::set<int>>> coverage;
    std::map<RecordKey, int> counts;
    SanityReport rep;
    std::set<SanityIssue> issues;
    for (const auto& r : records) {
        coverage[r.solver][r.function()].insert(r.iid);
        if (++counts[key_of(r)] == 2) issues.insert({r.solver, IssueKind::duplicate_run, r.fid, r.dim, r.iid});
        if (r.fe_count < 1) issues.insert({r.solver, IssueKind::non_positive_fe, r.fid, r.dim, r.iid});
    }
    for (const auto& [solver, fns] : coverage) {
        bool ok = true;
        for (const auto& [fn, iids] : fns)
            for (int iid : required_iids)
                if (!iids.contains(iid)) {
                    ok = false;
                    issues.insert({solver, IssueKind::missing_instance, fn.fid, fn.dim, iid});
                }
        (ok ? rep.valid_solvers : rep.invalid_solvers).insert(solver);
    }
    rep.issues.assign(issues.begin(), issues.end());
    return rep;
}

std::string SanityReport::to_text() const {
    std::ostringstream out;
    out << "valid solvers: " << valid_solvers.size() << ", invalid solvers: " << invalid_solvers.size() << '\n';
    for (const auto& s : invalid_solvers) out << "  invalid: " << s << '\n';
    for (const auto& i : issues)
        out << i.solver << ": " << to_string(i.kind) << " fid=" << i.fid << " dim=" << i.dim << " iid=" << i.iid << '\n';
    return out.str();
}

std::string SanityReport::to_jsonl() const {
    std::ostringstream out;
    for (const auto& i : issues) {
        nlohmann::ordered_json j;
        j["solver"] = i.solver;
        j["issue_kind"] = to_string(i.kind);
        j["fid"] = i.fid;
        j["dim"] = i.dim;
        j["iid"] = i.iid;
        out << j.dump() << '\n';
    }
    return out.str();
}

std::vector<RunRecord> restrict_iids(const std::vector<RunRecord>& records, const std::set<int>& iids) {
    std::vector<RunRecord> out;
    for (const auto& r : records)
        if (iids.contains(r.iid)) out.push_back(r);
    return out;
}

std::vector<RunRecord> first_run_only(const std::vector<RunRecord>& records) {
    std::map<std::tuple<std::string, int, int, int>, std::size_t> first;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        auto [it, inserted] = first.emplace(std::make_tuple(r.solver, r.fid, r.dim, r.iid), i);
        if (!inserted && r.run < records[it->second].run) it->second = i;
    }
    std::vector<char> keep(records.size(), 0);
    for (const auto& [k, i] : first) keep[i] = 1;
    std::vector<RunRecord> out;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (keep[i]) out.push_back(records[i]);
    return out;
}

}  // namespace ela::ingest
