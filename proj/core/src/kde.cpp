#include "elicit/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "elicit/error.hpp"
#include "elicit/normal.hpp"

namespace elicit {

std::string_view to_string(StddevConvention c) {
    return c == StddevConvention::sample ? "sample (n-1 denominator)" : "population (n denominator)";
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw validation_error("quantile of empty data");
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("quantile probability outside [0, 1]");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BandwidthEstimate silverman_bandwidth_details(std::span<const double> data, StddevConvention convention) {
    const std::size_t n = data.size();
    if (n < 2) throw validation_error("bandwidth selection needs at least two points");
    for (double x : data) {
        if (!std::isfinite(x)) throw validation_error("bandwidth data contains a non-finite value");
    }
    const double mean = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : data) ss += (x - mean) * (x - mean);
    const double denom = convention == StddevConvention::sample ? static_cast<double>(n - 1) : static_cast<double>(n);

    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());

    BandwidthEstimate est;
    est.n = n;
    est.stddev_convention = convention;
    est.stddev = std::sqrt(ss / denom);
    est.iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    if (est.stddev == 0.0 && est.iqr == 0.0) throw validation_error("bandwidth undefined for constant data");

    double spread = est.stddev;
    if (est.iqr > 0.0 && est.iqr / 1.34 < est.stddev) {
        spread = est.iqr / 1.34;
        est.iqr_term_used = true;
    }
    est.bandwidth = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    return est;
}

double silverman_bandwidth(std::span<const double> data) { return silverman_bandwidth_details(data).bandwidth; }

KdeModel::KdeModel(std::vector<double> points, double bandwidth) : points_(std::move(points)), bandwidth_(bandwidth) {
    if (points_.empty()) throw validation_error("KDE needs at least one point");
    if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) throw validation_error("KDE bandwidth must be positive");
}

double KdeModel::pdf(double x) const {
    double sum = 0.0;
    for (double p : points_) sum += standard_normal_pdf((x - p) / bandwidth_);
    return sum / (static_cast<double>(points_.size()) * bandwidth_);
}

double KdeModel::cdf(double x) const {
    double sum = 0.0;
    for (double p : points_) sum += standard_normal_cdf((x - p) / bandwidth_);
    return std::clamp(sum / static_cast<double>(points_.size()), 0.0, 1.0);
}

}  // namespace elicit
