#include "ela/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ela/csv.hpp"
#include "ela/rng.hpp"

namespace ela::problems {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Location of the Schwefel optimum in units of 100.
constexpr double kSchwefelOpt = 4.2096874633;
constexpr double kLunacekMu0 = 2.5;

bool is_rotated(int fid) { return fid == 10 || fid == 14 || fid == 17 || fid == 24; }

double axis_exponent(int i, int d) { return static_cast<double>(i) / static_cast<double>(d - 1); }

double rastrigin(const Eigen::VectorXd& z) {
    double c = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) c += std::cos(kTwoPi * z[i]);
    return 10.0 * (static_cast<double>(z.size()) - c) + z.squaredNorm();
}

double schwefel_raw(const Eigen::VectorXd& z) {
    const auto d = static_cast<double>(z.size());
    double sum = 0.0, pen = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double u = z[i] + kSchwefelOpt;
        const double v = 100.0 * u;
        sum += v * std::sin(std::sqrt(std::abs(v)));
        const double excess = std::max(0.0, std::abs(u) - 5.0);
        pen += excess * excess;
    }
    return -sum / (100.0 * d) + 100.0 * pen;
}

}  // namespace

std::string function_name(int fid) {
    switch (fid) {
        case 1: return "Sphere";
        case 3: return "Rastrigin";
        case 4: return "Buche-Rastrigin";
        case 5: return "Linear Slope";
        case 8: return "Rosenbrock";
        case 10: return "Ellipsoidal";
        case 14: return "Different Powers";
        case 17: return "Schaffers F7";
        case 20: return "Schwefel";
        case 24: return "Lunacek bi-Rastrigin";
        default: throw UnsupportedFunction("unsupported function id " + std::to_string(fid));
    }
}

bool is_multimodal(int fid) { return fid == 3 || fid == 4 || fid == 17 || fid == 20 || fid == 24; }

ProblemInstance::ProblemInstance(ProblemId id, Eigen::VectorXd x_opt, Eigen::MatrixXd rotation, double y_opt)
    : id_(id), x_opt_(std::move(x_opt)), rotation_(std::move(rotation)), y_opt_(y_opt) {}

double ProblemInstance::operator()(const Eigen::VectorXd& x) const {
    const int d = id_.dim;
    const Eigen::VectorXd shifted = x - x_opt_;
    const Eigen::VectorXd z = is_rotated(id_.fid) ? Eigen::VectorXd(rotation_ * shifted) : shifted;
    double f = 0.0;
    switch (id_.fid) {
        case 1: f = z.squaredNorm(); break;
        case 3: f = rastrigin(z); break;
        case 4: {
            Eigen::VectorXd s(d);
            for (int i = 0; i < d; ++i) {
                s[i] = std::pow(10.0, 0.5 * axis_exponent(i, d)) * z[i];
                if (s[i] > 0.0 && i % 2 == 0) s[i] *= 10.0;
            }
            f = rastrigin(s);
            break;
        }
        case 5: {
            for (int i = 0; i < d; ++i) {
                const double sign = x_opt_[i] > 0.0 ? 1.0 : -1.0;
                const double slope = sign * std::pow(10.0, axis_exponent(i, d));
                const double zi = (x_opt_[i] * x[i] < 25.0) ? x[i] : x_opt_[i];
                f += 5.0 * std::abs(slope) - slope * zi;
            }
            break;
        }
        case 8: {
            const double scale = std::max(1.0, std::sqrt(static_cast<double>(d)) / 8.0);
            const Eigen::VectorXd zz = (scale * z).array() + 1.0;
            for (int i = 0; i + 1 < d; ++i) {
                const double a = zz[i] * zz[i] - zz[i + 1];
                const double b = zz[i] - 1.0;
                f += 100.0 * a * a + b * b;
            }
            break;
        }
        case 10:
            for (int i = 0; i < d; ++i) f += std::pow(10.0, 6.0 * axis_exponent(i, d)) * z[i] * z[i];
            break;
        case 14: {
            double s = 0.0;
            for (int i = 0; i < d; ++i) s += std::pow(std::abs(z[i]), 2.0 + 4.0 * axis_exponent(i, d));
            f = std::sqrt(s);
            break;
        }
        case 17: {
            double s = 0.0;
            for (int i = 0; i + 1 < d; ++i) {
                const double r = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
                const double sr = std::sqrt(r);
                const double sn = std::sin(50.0 * std::pow(r, 0.2));
                s += sr + sr * sn * sn;
            }
            s /= static_cast<double>(d - 1);
            f = s * s;
            break;
        }
        case 20:
            f = schwefel_raw(z) - schwefel_raw(Eigen::VectorXd::Zero(d));
            break;
        case 24: {
            const double dd = static_cast<double>(d);
            const double s = 1.0 - 1.0 / (2.0 * std::sqrt(dd + 20.0) - 8.2);
            const double mu1 = -std::sqrt((kLunacekMu0 * kLunacekMu0 - 1.0) / s);
            double first = 0.0, second = 0.0;
            for (int i = 0; i < d; ++i) {
                const double w = shifted[i] + kLunacekMu0;
                first += (w - kLunacekMu0) * (w - kLunacekMu0);
                second += (w - mu1) * (w - mu1);
            }
            double c = 0.0;
            for (int i = 0; i < d; ++i) c += std::cos(kTwoPi * z[i]);
            f = std::min(first, dd + s * second) + 10.0 * (dd - c);
            break;
        }
        default: throw UnsupportedFunction("unsupported function id " + std::to_string(id_.fid));
    }
    return f + y_opt_;
}

sampling::Objective ProblemInstance::objective() const {
    return [inst = *this](const Eigen::VectorXd& x) { return inst(x); };
}

ProblemInstance make_instance(int fid, int dim, int iid, std::uint64_t seed_base) {
    function_name(fid);  // validates fid
    if (dim < 2) throw InvalidArgument("dimension must be at least 2");
    if (iid < 0) throw InvalidArgument("instance id must be non-negative");

    Eigen::VectorXd x_opt = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(dim, dim);
    double y_opt = 0.0;

    if (fid == 5 && iid == 0) x_opt.setConstant(5.0);
    if (iid > 0) {
        Rng rng(derive_seed(seed_base, {static_cast<std::uint64_t>(fid), static_cast<std::uint64_t>(dim),
                                        static_cast<std::uint64_t>(iid)}));
        for (int i = 0; i < dim; ++i) {
            // Central 80% of [-5, 5]; the slope function keeps its optimum on a corner.
            x_opt[i] = fid == 5 ? (rng.bernoulli(0.5) ? 5.0 : -5.0) : rng.uniform(-4.0, 4.0);
        }
        Eigen::MatrixXd g(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) g(r, c) = rng.normal();
        if (is_rotated(fid)) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
            Eigen::MatrixXd q = qr.householderQ();
            const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
            for (int c = 0; c < dim; ++c)
                if (r(c, c) < 0.0) q.col(c) *= -1.0;
            rot = q;
        }
        y_opt = std::round(rng.uniform(-1000.0, 1000.0) * 100.0) / 100.0;
    }
    return ProblemInstance(ProblemId{fid, dim, iid}, std::move(x_opt), std::move(rot), y_opt);
}

std::vector<ProblemInstance> suite(const std::vector<int>& dims, const std::vector<int>& fids,
                                   const std::vector<int>& iids, std::uint64_t seed_base) {
    if (dims.empty() || fids.empty() || iids.empty()) throw InvalidArgument("suite axes must be non-empty");
    std::vector<int> ds = dims, fs = fids, is = iids;
    std::sort(ds.begin(), ds.end());
    std::sort(fs.begin(), fs.end());
    std::sort(is.begin(), is.end());
    for (auto* v : {&ds, &fs, &is}) v->erase(std::unique(v->begin(), v->end()), v->end());
    std::vector<ProblemInstance> out;
    out.reserve(ds.size() * fs.size() * is.size());
    for (int d : ds)
        for (int f : fs)
            for (int i : is) out.push_back(make_instance(f, d, i, seed_base));
    return out;
}

std::string manifest_csv(const std::vector<ProblemInstance>& instances) {
    std::ostringstream out;
    out << "fid,dim,iid,y_opt\n";
    for (const auto& inst : instances)
        out << inst.id().fid << ',' << inst.id().dim << ',' << inst.id().iid << ','
            << csv::format_double(inst.y_opt()) << '\n';
    return out.str();
}

}  // namespace ela::problems
