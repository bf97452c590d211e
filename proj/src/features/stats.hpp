#pragma once

// Small statistics helpers shared by the feature sets.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ela/common.hpp"
#include "ela/sampling.hpp"

namespace ela::features::detail {

inline void require_size(const sampling::SampleDesign& design, Eigen::Index min_n, const char* set) {
    design.y();
    if (design.size() < min_n)
        throw InvalidArgument(std::string(set) + " needs at least " + std::to_string(min_n) + " points");
}

inline double mean(std::span<const double> v) {
    if (v.empty()) return kNaN;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator).
inline double sd(std::span<const double> v) {
    if (v.size() < 2) return kNaN;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Quantile with linear interpolation between order statistics (R type 7).
inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

/// Pearson correlation; NaN when either side has zero variance.
inline double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) return kNaN;
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return kNaN;
    return sab / std::sqrt(saa * sbb);
}

/// Full Euclidean distance matrix between rows.
inline Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b) d(a, b) = d(b, a) = (x.row(a) - x.row(b)).norm();
    return d;
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

/// Quantile suffix used in feature names: 0.1 -> "10", 0.02 -> "02".
inline std::string quantile_tag(double q) {
    const long pct = std::lround(q * 100.0);
    return pct < 10 ? "0" + std::to_string(pct) : std::to_string(pct);
}

}  // namespace ela::features::detail
