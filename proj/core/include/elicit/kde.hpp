#pragma once

#include <span>
#include <string>
#include <vector>

namespace elicit {

enum class StddevConvention { sample, population };

std::string_view to_string(StddevConvention c);

// Quantile of sorted data by linear interpolation between order statistics
// (Hyndman-Fan type 7).
double quantile_sorted(std::span<const double> sorted, double p);

struct BandwidthEstimate {
    double bandwidth = 0.0;
    double stddev = 0.0;
    double iqr = 0.0;
    std::size_t n = 0;
    StddevConvention stddev_convention = StddevConvention::sample;
    bool iqr_term_used = false;  // IQR/1.34 was the smaller spread estimate
};

// h = 0.9 * min(sigma, IQR / 1.34) * n^(-1/5). Falls back to sigma when the
// IQR is zero; throws validation_error for constant data or n < 2.
BandwidthEstimate silverman_bandwidth_details(std::span<const double> data,
                                              StddevConvention convention = StddevConvention::sample);
double silverman_bandwidth(std::span<const double> data);

// Gaussian-kernel density estimate.
class KdeModel {
public:
    KdeModel() = default;
    KdeModel(std::vector<double> points, double bandwidth);

    const std::vector<double>& points() const { return points_; }
    double bandwidth() const { return bandwidth_; }

    double pdf(double x) const;
    double cdf(double x) const;

private:
    std::vector<double> points_;
    double bandwidth_ = 1.0;
};

}  // namespace elicit
