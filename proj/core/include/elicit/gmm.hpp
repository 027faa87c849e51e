#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace elicit {

struct GaussianComponent {
    double weight = 1.0;  // mixture weight, in (0, 1]
    double mean = 0.0;
    double stddev = 1.0;

    bool operator==(const GaussianComponent&) const = default;
};

// Univariate Gaussian mixture. Components are kept in ascending mean order and
// the weights sum to one.
class GaussianMixture {
public:
    GaussianMixture() = default;
    explicit GaussianMixture(std::vector<GaussianComponent> components);

    const std::vector<GaussianComponent>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }

    double pdf(double x) const;
    double log_pdf(double x) const;
    double cdf(double x) const;
    // phi_k * N(x | mu_k, sigma_k)
    double weighted_component_pdf(std::size_t k, double x) const;
    // Responsibility of component k for x, computed in log space.
    double posterior(double x, std::size_t k) const;

    // The highest-mean component, read as the "ill" subpopulation.
    std::size_t ill_component() const { return components_.size() - 1; }

private:
    std::vector<GaussianComponent> components_;
};

struct EmOptions {
    double tolerance = 1e-9;           // relative change in log-likelihood
    std::size_t max_iterations = 20000;
    double min_stddev = 1e-6;
    // Extra random-start fits after the deterministic one; the best
    // log-likelihood wins. Zero keeps the fit fully deterministic.
    std::size_t restarts = 0;
    std::uint64_t seed = 0;
};

struct FitReport {
    std::size_t components = 0;
    std::size_t free_parameters = 0;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool monotone = true;  // log-likelihood never decreased between iterations
    std::string initialization;
    std::vector<double> log_likelihood_trace;
};

struct EmFit {
    GaussianMixture model;
    FitReport report;
};

EmFit em_fit(std::span<const double> data, std::size_t components, const EmOptions& options = {});

inline constexpr std::size_t free_parameter_count(std::size_t components) { return 3 * components - 1; }

double log_likelihood(const GaussianMixture& model, std::span<const double> data);

struct InformationCriteria {
    double log_likelihood = 0.0;
    double aic = 0.0;  // 2p - 2 ln L
    double bic = 0.0;  // p ln n - 2 ln L
    std::size_t free_parameters = 0;
};

InformationCriteria information_criteria(const GaussianMixture& model, std::span<const double> data);

struct ComponentSelection {
    std::size_t by_bic = 1;  // the selected count
    std::size_t by_aic = 1;
    bool criteria_agree = true;
    std::vector<EmFit> fits;  // one per candidate M = 1..m_max
};

ComponentSelection select_component_count(std::span<const double> data, std::size_t m_max,
                                          const EmOptions& options = {});

}  // namespace elicit
