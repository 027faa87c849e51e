#include "elicit/normal.hpp"

#include <cmath>
#include <numbers>

namespace elicit {

double standard_normal_pdf(double z) { return inv_sqrt_2pi * std::exp(-0.5 * z * z); }

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double x, double mean, double stddev) {
    return standard_normal_pdf((x - mean) / stddev) / stddev;
}

double normal_log_pdf(double x, double mean, double stddev) {
    const double z = (x - mean) / stddev;
    return -0.5 * z * z - std::log(stddev) + std::log(inv_sqrt_2pi);
}

double normal_cdf(double x, double mean, double stddev) { return standard_normal_cdf((x - mean) / stddev); }

}  // namespace elicit
