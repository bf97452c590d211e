#include "ela/sampling.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "ela/common.hpp"
#include "ela/csv.hpp"
#include "ela/rng.hpp"

namespace ela::sampling {

BoxDomain::BoxDomain(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() == 0) throw InvalidArgument("domain dimension must be positive");
    if (lower_.size() != upper_.size()) throw InvalidArgument("domain bounds differ in length");
    for (Eigen::Index k = 0; k < lower_.size(); ++k) {
        if (!(lower_[k] < upper_[k]) || !std::isfinite(lower_[k]) || !std::isfinite(upper_[k]))
            throw InvalidArgument("degenerate domain on axis " + std::to_string(k + 1));
    }
}

BoxDomain BoxDomain::cube(int dim, double lo, double hi) {
    if (dim <= 0) throw InvalidArgument("domain dimension must be positive");
    return BoxDomain(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
}

bool BoxDomain::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != lower_.size()) return false;
    return ((x.array() >= lower_.array()) && (x.array() <= upper_.array())).all();
}

BoxDomain BoxDomain::shifted(const Eigen::VectorXd& offset) const {
    return BoxDomain(lower_ + offset, upper_ + offset);
}

const Eigen::VectorXd& SampleDesign::y() const {
    if (!values) throw InvalidArgument("design has no objective values attached");
    return *values;
}

SampleDesign plain_lhd(Eigen::Index n, const BoxDomain& domain, std::uint64_t seed) {
    if (n < 2) throw InvalidArgument("a Latin hypercube design needs n >= 2 points");
    const int d = domain.dim();
    Rng rng(seed);
    Eigen::MatrixXd pts(n, d);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    const double nn = static_cast<double>(n);
    for (int k = 0; k < d; ++k) {
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        rng.shuffle(std::span(perm));
        const double lo = domain.lower()[k];
        const double w = domain.upper()[k] - lo;
        for (Eigen::Index i = 0; i < n; ++i) {
            double u = (static_cast<double>(perm[static_cast<std::size_t>(i)]) + rng.uniform()) / nn;
            pts(i, k) = std::min(lo + u * w, domain.upper()[k]);
        }
    }
    return SampleDesign{std::move(pts), std::nullopt, domain, static_cast<std::int64_t>(n)};
}

namespace {

double sq_dist(const Eigen::MatrixXd& p, Eigen::Index a, Eigen::Index b) {
    return (p.row(a) - p.row(b)).squaredNorm();
}

struct MinState {
    double min_sq = kInf;
    std::vector<char> critical;
};

MinState scan_min(const Eigen::MatrixXd& dist) {
    const Eigen::Index n = dist.rows();
    MinState s;
    s.critical.assign(static_cast<std::size_t>(n), 0);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b) s.min_sq = std::min(s.min_sq, dist(a, b));
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b)
            if (dist(a, b) == s.min_sq) s.critical[a] = s.critical[b] = 1;
    return s;
}

}  // namespace

SampleDesign improved_lhd(Eigen::Index n, const BoxDomain& domain, std::uint64_t seed, int iterations) {
    SampleDesign design = plain_lhd(n, domain, seed);
    Eigen::MatrixXd& p = design.points;
    const int d = domain.dim();

    Eigen::MatrixXd dist(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        dist(a, a) = kInf;
        for (Eigen::Index b = a + 1; b < n; ++b) dist(a, b) = dist(b, a) = sq_dist(p, a, b);
    }
    MinState state = scan_min(dist);

    // Swap proposals use their own stream so the initial design equals plain_lhd.
    Rng rng(derive_seed(seed, {0x1f1f}));
    Eigen::VectorXd row_i(n), row_j(n);
    for (int it = 0; it < iterations; ++it) {
        const auto k = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(d)));
        const auto i = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
        auto j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - 1)));
        if (j >= i) ++j;
        // Every closest pair avoiding rows i and j survives the swap unchanged,
        // so the minimum can only grow when one of them is critical.
        if (!state.critical[i] && !state.critical[j]) continue;

        std::swap(p(i, k), p(j, k));
        double cand = kInf;
        for (Eigen::Index r = 0; r < n; ++r) {
            row_i[r] = (r == i) ? kInf : (r == j ? dist(i, j) : sq_dist(p, i, r));
            row_j[r] = (r == j) ? kInf : (r == i ? dist(i, j) : sq_dist(p, j, r));
            cand = std::min({cand, row_i[r], row_j[r]});
        }
        if (cand > state.min_sq) {
            for (Eigen::Index a = 0; a < n && cand > state.min_sq; ++a) {
                if (a == i || a == j) continue;
                for (Eigen::Index b = a + 1; b < n; ++b) {
                    if (b == i || b == j) continue;
                    cand = std::min(cand, dist(a, b));
                }
            }
        }
        if (cand > state.min_sq) {
            for (Eigen::Index r = 0; r < n; ++r) {
                dist(i, r) = dist(r, i) = row_i[r];
                dist(j, r) = dist(r, j) = row_j[r];
            }
            dist(i, i) = dist(j, j) = kInf;
            state = scan_min(dist);
        } else {
            std::swap(p(i, k), p(j, k));
        }
    }
    return design;
}

double min_pairwise_distance(const Eigen::MatrixXd& points) {
    double best = kInf;
    for (Eigen::Index a = 0; a < points.rows(); ++a)
        for (Eigen::Index b = a + 1; b < points.rows(); ++b) best = std::min(best, sq_dist(points, a, b));
    return std::sqrt(best);
}

SampleDesign evaluate_design(SampleDesign design, const Objective& f) {
    if (design.values) throw InvalidArgument("design already has objective values");
    Eigen::VectorXd y(design.size());
    Eigen::VectorXd x(design.dim());
    for (Eigen::Index i = 0; i < design.size(); ++i) {
        x = design.points.row(i).transpose();
        const double v = f(x);
        if (!std::isfinite(v))
            throw EvaluationError(static_cast<std::size_t>(i),
                                  "non-finite objective value at point " + std::to_string(i));
        y[i] = v;
    }
    design.values = std::move(y);
    return design;
}

std::string design_to_csv(const SampleDesign& design) {
    std::ostringstream out;
    for (int k = 0; k < design.dim(); ++k) out << (k ? "," : "") << 'x' << (k + 1);
    if (design.values) out << ",y";
    out << '\n';
    for (Eigen::Index i = 0; i < design.size(); ++i) {
        for (int k = 0; k < design.dim(); ++k) out << (k ? "," : "") << csv::format_double(design.points(i, k));
        if (design.values) out << ',' << csv::format_double((*design.values)[i]);
        out << '\n';
    }
    return out.str();
}

SampleDesign design_from_csv(const std::string& text, const BoxDomain& domain) {
    auto rows = csv::lines(text);
    if (rows.empty()) throw ParseError(1, "missing header");
    auto header = csv::split(rows[0]);
    const int d = domain.dim();
    const bool has_y = !header.empty() && header.back() == "y";
    if (static_cast<int>(header.size()) != d + (has_y ? 1 : 0))
        throw ParseError(1, "expected " + std::to_string(d) + " coordinate columns");
    for (int k = 0; k < d; ++k)
        if (header[static_cast<std::size_t>(k)] != "x" + std::to_string(k + 1))
            throw ParseError(1, "unexpected column '" + header[static_cast<std::size_t>(k)] + "'");

    std::vector<std::vector<double>> data;
    for (std::size_t li = 1; li < rows.size(); ++li) {
        if (rows[li].empty()) continue;
        auto fields = csv::split(rows[li]);
        if (fields.size() != header.size()) throw ParseError(li + 1, "wrong number of fields");
        std::vector<double> vals;
        for (auto& f : fields) {
            auto v = csv::parse_double(f);
            if (!v) throw ParseError(li + 1, "not a number: '" + f + "'");
            vals.push_back(*v);
        }
        data.push_back(std::move(vals));
    }
    const auto n = static_cast<Eigen::Index>(data.size());
    SampleDesign design{Eigen::MatrixXd(n, d), std::nullopt, domain, n};
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) design.points(i, k) = data[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        if (has_y) y[i] = data[static_cast<std::size_t>(i)].back();
        if (!domain.contains(design.points.row(i).transpose()))
            throw ParseError(static_cast<std::size_t>(i) + 2, "point outside the domain");
    }
    if (has_y) design.values = std::move(y);
    return design;
}

}  // namespace ela::sampling
