#include "ela/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ela/csv.hpp"

namespace ela::report {

const std::vector<Group>& bbob_groups() {
    static const std::vector<Group> groups{
        {"F1-F5", 1, 5}, {"F6-F9", 6, 9}, {"F10-F14", 10, 14}, {"F15-F19", 15, 19}, {"F20-F24", 20, 24}};
    return groups;
}

std::string group_of(int fid) {
    for (const auto& g : bbob_groups())
        if (fid >= g.first_fid && fid <= g.last_fid) return g.label;
    throw InvalidArgument("fid " + std::to_string(fid) + " is outside the BBOB range 1..24");
}

namespace {

const std::vector<double>& cv_column(const sel::CvResult& cv, const perf::PerformanceTable& table) {
    if (cv.problems != table.problems) throw AlignmentError("CV result does not cover the table's problems");
    return cv.relert_cost;
}

std::string fmt(double v) { return csv::format_double(v); }

}  // namespace

std::string table_one_csv(const perf::PerformanceTable& table, const std::vector<SelectorResult>& selectors) {
    for (const auto& s : selectors) cv_column(s.cv, table);
    std::set<int> dims;
    for (const auto& p : table.problems) dims.insert(p.dim);

    std::ostringstream out;
    out << "dim,group,n";
    for (const auto& s : table.solvers) out << ',' << s;
    for (const auto& s : selectors) out << ',' << s.name;
    out << ",sbs\n";

    auto emit = [&](const std::string& dim_label, const std::string& group_label, auto&& member) {
        std::vector<Eigen::Index> cols;
        for (Eigen::Index p = 0; p < table.n_problems(); ++p)
            if (member(table.problems[static_cast<std::size_t>(p)])) cols.push_back(p);
        if (cols.empty()) return;
        const double n = static_cast<double>(cols.size());
        out << dim_label << ',' << group_label << ',' << cols.size();
        Eigen::Index sbs = 0;
        double sbs_mean = kInf;
        for (Eigen::Index s = 0; s < table.n_solvers(); ++s) {
            double sum = 0.0;
            for (auto p : cols) sum += table.relert(s, p);
            out << ',' << fmt(sum / n);
            if (sum / n < sbs_mean) sbs_mean = sum / n, sbs = s;
        }
        for (const auto& sr : selectors) {
            double sum = 0.0;
            for (auto p : cols) sum += sr.cv.relert_cost[static_cast<std::size_t>(p)];
            out << ',' << fmt(sum / n);
        }
        out << ',' << table.solvers[static_cast<std::size_t>(sbs)] << '\n';
    };

    for (int d : dims) {
        for (const auto& g : bbob_groups())
            emit(std::to_string(d), g.label, [&](const FunctionKey& k) {
                return k.dim == d && k.fid >= g.first_fid && k.fid <= g.last_fid;
            });
        emit(std::to_string(d), "all", [&](const FunctionKey& k) { return k.dim == d; });
    }
    for (const auto& g : bbob_groups())
        emit("all", g.label, [&](const FunctionKey& k) { return k.fid >= g.first_fid && k.fid <= g.last_fid; });
    emit("all", "all", [](const FunctionKey&) { return true; });
    return out.str();
}

namespace {

struct ScatterPoint {
    std::string selector;
    FunctionKey key;
    double vbs;
    double sel;
    bool imputed;
};

std::vector<ScatterPoint> scatter_points(const perf::PerformanceTable& table, const std::vector<SelectorResult>& selectors) {
    std::vector<ScatterPoint> pts;
    for (const auto& s : selectors) {
        const auto& rel = cv_column(s.cv, table);
        for (Eigen::Index p = 0; p < table.n_problems(); ++p) {
            const auto idx = table.solver_index(s.cv.predicted[static_cast<std::size_t>(p)]);
            const double best = table.best_ert(p);
            pts.push_back({s.name, table.problems[static_cast<std::size_t>(p)], best,
                           rel[static_cast<std::size_t>(p)] * best, idx >= 0 && table.imputed(idx, p)});
        }
    }
    return pts;
}

}  // namespace

std::string scatter_csv(const perf::PerformanceTable& table, const std::vector<SelectorResult>& selectors) {
    std::ostringstream out;
    out << "selector,dim,fid,vbs_ert,selector_ert,imputed,log10_vbs_ert,log10_selector_ert\n";
    for (const auto& q : scatter_points(table, selectors))
        out << q.selector << ',' << q.key.dim << ',' << q.key.fid << ',' << fmt(q.vbs) << ',' << fmt(q.sel) << ','
            << (q.imputed ? 1 : 0) << ',' << fmt(std::log10(q.vbs)) << ',' << fmt(std::log10(q.sel)) << '\n';
    return out.str();
}

std::string confusion_csv(const perf::PerformanceTable& table, const std::vector<Eigen::Index>& labels,
                          const sel::CvResult& cv) {
    cv_column(cv, table);
    if (static_cast<Eigen::Index>(labels.size()) != table.n_problems()) throw InvalidArgument("one label per problem required");
    const auto ns = static_cast<std::size_t>(table.n_solvers());
    std::vector<std::vector<int>> counts(ns, std::vector<int>(ns, 0));
    for (std::size_t p = 0; p < labels.size(); ++p) {
        const auto pred = table.solver_index(cv.predicted[p]);
        if (pred < 0) throw AlignmentError("predicted solver '" + cv.predicted[p] + "' is not in the table");
        ++counts[static_cast<std::size_t>(labels[p])][static_cast<std::size_t>(pred)];
    }
    std::ostringstream out;
    out << "best";
    for (const auto& s : table.solvers) out << ',' << s;
    out << ",#\n";
    for (std::size_t r = 0; r < ns; ++r) {
        out << table.solvers[r];
        int sum = 0;
        for (std::size_t c = 0; c < ns; ++c) out << ',' << counts[r][c], sum += counts[r][c];
        out << ',' << sum << '\n';
    }
    return out.str();
}

namespace {

struct Ratio {
    FunctionKey key;
    double portfolio_best;
    double overall_best;
};

std::vector<Ratio> ratios(const perf::PerformanceTable& candidates, const perf::Portfolio& portfolio) {
    std::vector<Eigen::Index> members;
    for (const auto& m : portfolio.members) {
        const auto i = candidates.solver_index(m);
        if (i < 0) throw AlignmentError("portfolio member '" + m + "' is not a candidate solver");
        members.push_back(i);
    }
    std::vector<Ratio> out;
    for (Eigen::Index p = 0; p < candidates.n_problems(); ++p) {
        double pb = kInf;
        for (auto i : members) pb = std::min(pb, candidates.ert(i, p));
        out.push_back({candidates.problems[static_cast<std::size_t>(p)], pb, candidates.best_ert(p)});
    }
    return out;
}

}  // namespace

std::string ratio_csv(const perf::PerformanceTable& candidates, const perf::Portfolio& portfolio) {
    std::ostringstream out;
    out << "dim,fid,portfolio_best_ert,overall_best_ert,ratio\n";
    for (const auto& r : ratios(candidates, portfolio))
        out << r.key.dim << ',' << r.key.fid << ',' << fmt(r.portfolio_best) << ',' << fmt(r.overall_best) << ','
            << fmt(r.portfolio_best / r.overall_best) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kW = 480, kH = 400, kPad = 50;
const char* const kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"};

std::string svg_open() {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW
      << ' ' << kH << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return s.str();
}

}  // namespace

std::string scatter_svg(const perf::PerformanceTable& table, const std::vector<SelectorResult>& selectors) {
    const auto pts = scatter_points(table, selectors);
    double lo = kInf, hi = -kInf;
    for (const auto& q : pts) {
        lo = std::min({lo, std::log10(q.vbs), std::log10(q.sel)});
        hi = std::max({hi, std::log10(q.vbs), std::log10(q.sel)});
    }
    if (!(hi > lo)) lo -= 1, hi += 1;
    auto sx = [&](double v) { return kPad + (std::log10(v) - lo) / (hi - lo) * (kW - 2 * kPad); };
    auto sy = [&](double v) { return kH - kPad - (std::log10(v) - lo) / (hi - lo) * (kH - 2 * kPad); };
    std::ostringstream s;
    s << svg_open();
    s << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad << "\" y2=\"" << kPad
      << "\" stroke=\"#999\" stroke-dasharray=\"4\"/>\n";
    s << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\" font-size=\"12\">log10 ERT (VBS)</text>\n";
    s << "<text x=\"14\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 14 " << kH / 2
      << ")\" text-anchor=\"middle\" font-size=\"12\">log10 ERT (selector)</text>\n";
    std::map<std::string, const char*> colour;
    for (std::size_t i = 0; i < selectors.size(); ++i) colour[selectors[i].name] = kPalette[i % 6];
    for (const auto& q : pts)
        s << "<circle cx=\"" << fmt(sx(q.vbs)) << "\" cy=\"" << fmt(sy(q.sel)) << "\" r=\"3\" fill=\"" << colour[q.selector]
          << "\" fill-opacity=\"0.7\"/>\n";
    for (std::size_t i = 0; i < selectors.size(); ++i)
        s << "<text x=\"" << kPad + 5 << "\" y=\"" << kPad + 14 * static_cast<double>(i) << "\" font-size=\"11\" fill=\""
          << kPalette[i % 6] << "\">" << selectors[i].name << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string ratio_svg(const perf::PerformanceTable& candidates, const perf::Portfolio& portfolio) {
    std::map<int, std::vector<double>> by_dim;
    for (const auto& r : ratios(candidates, portfolio)) by_dim[r.key.dim].push_back(r.portfolio_best / r.overall_best);
    double hi = 1.0;
    for (auto& [d, v] : by_dim) {
        std::sort(v.begin(), v.end());
        hi = std::max(hi, v.back());
    }
    auto sy = [&](double v) { return kH - kPad - (v - 1.0) / (hi - 1.0 + 1e-12) * (kH - 2 * kPad); };
    auto q = [](const std::vector<double>& v, double f) {
        const double h = (static_cast<double>(v.size()) - 1) * f;
        const auto i = static_cast<std::size_t>(std::floor(h));
        return i + 1 < v.size() ? v[i] + (h - static_cast<double>(i)) * (v[i + 1] - v[i]) : v[i];
    };
    std::ostringstream s;
    s << svg_open();
    const double step = (kW - 2 * kPad) / static_cast<double>(std::max<std::size_t>(by_dim.size(), 1));
    std::size_t k = 0;
    for (const auto& [d, v] : by_dim) {
        const double cx = kPad + step * (static_cast<double>(k) + 0.5), w = step * 0.3;
        const double q1 = q(v, 0.25), q2 = q(v, 0.5), q3 = q(v, 0.75);
        s << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(sy(v.front())) << "\" x2=\"" << fmt(cx) << "\" y2=\""
          << fmt(sy(v.back())) << "\" stroke=\"black\"/>\n";
        s << "<rect x=\"" << fmt(cx - w) << "\" y=\"" << fmt(sy(q3)) << "\" width=\"" << fmt(2 * w) << "\" height=\""
          << fmt(std::max(sy(q1) - sy(q3), 1.0)) << "\" fill=\"#a6cee3\" stroke=\"black\"/>\n";
        s << "<line x1=\"" << fmt(cx - w) << "\" y1=\"" << fmt(sy(q2)) << "\" x2=\"" << fmt(cx + w) << "\" y2=\""
          << fmt(sy(q2)) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << fmt(cx) << "\" y=\"" << kH - kPad + 16 << "\" text-anchor=\"middle\" font-size=\"12\">" << d
          << "D</text>\n";
        ++k;
    }
    s << "<text x=\"14\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 14 " << kH / 2
      << ")\" text-anchor=\"middle\" font-size=\"12\">ERT ratio portfolio best / overall best</text>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace ela::report
