#pragma once

namespace elicit {

inline constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;

double standard_normal_pdf(double z);
// Phi(z) via the complementary error function, accurate in both tails.
double standard_normal_cdf(double z);

double normal_pdf(double x, double mean, double stddev);
double normal_log_pdf(double x, double mean, double stddev);
double normal_cdf(double x, double mean, double stddev);

}  // namespace elicit
