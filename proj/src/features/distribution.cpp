#include "ela/features.hpp"
#include "stats.hpp"

namespace ela::features {

namespace {

// Silverman's rule of thumb, 0.9 * min(sd, IQR / 1.34) * n^(-1/5), with the
// usual fallbacks when the spread estimate is zero.
double silverman_bandwidth(const std::vector<double>& y) {
    const double s = detail::sd(y);
    const double iqr = detail::quantile(y, 0.75) - detail::quantile(y, 0.25);
    double lo = std::min(s, iqr / 1.34);
    if (!(lo > 0.0)) lo = s > 0.0 ? s : (y[0] != 0.0 ? std::abs(y[0]) : 1.0);
    return 0.9 * lo * std::pow(static_cast<double>(y.size()), -0.2);
}

int count_kde_peaks(const std::vector<double>& y, int grid) {
    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    if (*mn == *mx) return 1;
    const double h = silverman_bandwidth(y);
    std::vector<double> dens(static_cast<std::size_t>(grid), 0.0);
    const double step = (*mx - *mn) / static_cast<double>(grid - 1);
    for (int g = 0; g < grid; ++g) {
        const double at = *mn + step * g;
        double s = 0.0;
        for (double v : y) {
            const double u = (at - v) / h;
            s += std::exp(-0.5 * u * u);
        }
        dens[static_cast<std::size_t>(g)] = s;
    }
    int peaks = 0;
    for (std::size_t g = 0; g < dens.size(); ++g) {
        const bool left = g == 0 || dens[g] > dens[g - 1];
        const bool right = g + 1 == dens.size() || dens[g] > dens[g + 1];
        if (left && right) ++peaks;
    }
    return peaks;
}

}  // namespace

FeatureVector ela_distribution(const sampling::SampleDesign& design, const FeatureConfig& cfg) {
    detail::require_size(design, 4, "ela_distr");
    const auto y = detail::to_vector(design.y());
    const double m = detail::mean(y);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : y) {
        const double c = v - m;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    const auto n = static_cast<double>(y.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    if (*mn == *mx) m2 = 0.0;

    FeatureVector fv;
    fv.push("ela_distr.skewness", m2 > 0.0 ? m3 / std::pow(m2, 1.5) : kNaN);
    fv.push("ela_distr.kurtosis", m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : kNaN);
    fv.push("ela_distr.number_of_peaks", count_kde_peaks(y, cfg.kde_grid));
    fv.cost_evals = design.evals_consumed;
    return fv;
}

}  // namespace ela::features
