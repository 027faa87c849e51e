#include "elicit/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "elicit/error.hpp"
#include "elicit/normal.hpp"

namespace elicit {

namespace {

double log_sum_exp(std::span<const double> terms) {
    const double top = *std::max_element(terms.begin(), terms.end());
    if (!std::isfinite(top)) return top;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - top);
    return top + std::log(acc);
}

void check_data(std::span<const double> data, std::size_t components) {
    if (components == 0) throw validation_error("a mixture needs at least one component");
    if (data.size() <= components) {
        throw validation_error("EM needs more data points (" + std::to_string(data.size()) + ") than components (" +
                               std::to_string(components) + ")");
    }
    for (double x : data) {
        if (!std::isfinite(x)) throw validation_error("EM data contains a non-finite value");
    }
}

// Contiguous equal-count blocks of the sorted data; the first n % M blocks
// get one extra point.
std::vector<GaussianComponent> block_initialization(std::span<const double> data, std::size_t m, double min_stddev) {
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::vector<GaussianComponent> init;
    std::size_t start = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t len = n / m + (k < n % m ? 1 : 0);
        const auto first = sorted.begin() + static_cast<std::ptrdiff_t>(start);
        const auto last = first + static_cast<std::ptrdiff_t>(len);
        const double mean = std::accumulate(first, last, 0.0) / static_cast<double>(len);
        double ss = 0.0;
        for (auto it = first; it != last; ++it) ss += (*it - mean) * (*it - mean);
        const double sd = std::max(std::sqrt(ss / static_cast<double>(len)), min_stddev);
        init.push_back({static_cast<double>(len) / static_cast<double>(n), mean, sd});
        start += len;
    }
    return init;
}

std::vector<GaussianComponent> random_initialization(std::span<const double> data, std::size_t m,
                                                     double min_stddev, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<std::size_t> picked;
    std::sample(idx.begin(), idx.end(), std::back_inserter(picked), static_cast<std::ptrdiff_t>(m), rng);
    const double mean = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(data.size());
    double ss = 0.0;
    for (double x : data) ss += (x - mean) * (x - mean);
    const double sd = std::max(std::sqrt(ss / static_cast<double>(data.size())), min_stddev);
    std::vector<GaussianComponent> init;
    for (std::size_t i : picked) init.push_back({1.0 / static_cast<double>(m), data[i], sd});
    return init;
}

EmFit run_em(std::span<const double> data, std::vector<GaussianComponent> params, const EmOptions& options,
             std::string initialization) {
    const std::size_t n = data.size();
    const std::size_t m = params.size();
    std::vector<double> resp(n * m);
    std::vector<double> terms(m);
    std::vector<double> offset(m);

    FitReport report;
    report.components = m;
    report.free_parameters = free_parameter_count(m);
    report.initialization = std::move(initialization);

    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0;; ++iter) {
        // E-step: log responsibilities and the total log-likelihood.
        for (std::size_t k = 0; k < m; ++k) {
            offset[k] = std::log(params[k].weight) - std::log(params[k].stddev) + std::log(inv_sqrt_2pi);
        }
        double ll = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            for (std::size_t k = 0; k < m; ++k) {
                const double z = (data[t] - params[k].mean) / params[k].stddev;
                terms[k] = offset[k] - 0.5 * z * z;
            }
            const double lse = log_sum_exp(terms);
            ll += lse;
            for (std::size_t k = 0; k < m; ++k) resp[t * m + k] = std::exp(terms[k] - lse);
        }
        if (!std::isfinite(ll)) throw runtime_failure("EM log-likelihood became non-finite");
        report.log_likelihood_trace.push_back(ll);
        if (iter > 0 && ll < previous - 1e-12 * std::abs(previous)) report.monotone = false;

        if (iter > 0 && std::abs(ll - previous) < options.tolerance * std::abs(ll)) {
            report.converged = true;
            break;
        }
        if (iter == options.max_iterations) break;
        previous = ll;

        // M-step.
        for (std::size_t k = 0; k < m; ++k) {
            double nk = 0.0;
            double sx = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                nk += resp[t * m + k];
                sx += resp[t * m + k] * data[t];
            }
            if (!(nk > 0.0)) throw runtime_failure("EM component " + std::to_string(k) + " lost all responsibility");
            const double mean = sx / nk;
            double ss = 0.0;
            for (std::size_t t = 0; t < n; ++t) ss += resp[t * m + k] * (data[t] - mean) * (data[t] - mean);
            params[k] = {nk / static_cast<double>(n), mean, std::max(std::sqrt(ss / nk), options.min_stddev)};
        }
        report.iterations = iter + 1;
    }

    report.log_likelihood = report.log_likelihood_trace.back();
    const double p = static_cast<double>(report.free_parameters);
    report.aic = 2.0 * p - 2.0 * report.log_likelihood;
    report.bic = p * std::log(static_cast<double>(n)) - 2.0 * report.log_likelihood;
    return {GaussianMixture(std::move(params)), std::move(report)};
}

}  // namespace

GaussianMixture::GaussianMixture(std::vector<GaussianComponent> components) : components_(std::move(components)) {
    if (components_.empty()) throw validation_error("a mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight > 0.0 && c.weight <= 1.0)) throw validation_error("mixture weight must lie in (0, 1]");
        if (!std::isfinite(c.mean)) throw validation_error("component mean must be finite");
        if (!(c.stddev > 0.0) || !std::isfinite(c.stddev)) throw validation_error("component stddev must be positive");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw validation_error("mixture weights must sum to 1");
    for (auto& c : components_) c.weight /= total;
    std::stable_sort(components_.begin(), components_.end(),
                     [](const GaussianComponent& a, const GaussianComponent& b) { return a.mean < b.mean; });
}

double GaussianMixture::pdf(double x) const {
    double sum = 0.0;
    for (const auto& c : components_) sum += c.weight * normal_pdf(x, c.mean, c.stddev);
    return sum;
}

double GaussianMixture::log_pdf(double x) const {
    std::vector<double> terms;
    terms.reserve(components_.size());
    for (const auto& c : components_) terms.push_back(std::log(c.weight) + normal_log_pdf(x, c.mean, c.stddev));
    return log_sum_exp(terms);
}

double GaussianMixture::cdf(double x) const {
    double sum = 0.0;
    for (const auto& c : components_) sum += c.weight * normal_cdf(x, c.mean, c.stddev);
    return std::clamp(sum, 0.0, 1.0);
}

double GaussianMixture::weighted_component_pdf(std::size_t k, double x) const {
    const auto& c = components_.at(k);
    return c.weight * normal_pdf(x, c.mean, c.stddev);
}

double GaussianMixture::posterior(double x, std::size_t k) const {
    if (k >= components_.size()) throw validation_error("component index out of range");
    std::vector<double> terms;
    terms.reserve(components_.size());
    for (const auto& c : components_) terms.push_back(std::log(c.weight) + normal_log_pdf(x, c.mean, c.stddev));
    const double top = *std::max_element(terms.begin(), terms.end());
    if (!std::isfinite(top)) return components_[k].weight;  // every component density is zero
    double denom = 0.0;
    for (double t : terms) denom += std::exp(t - top);
    return std::exp(terms[k] - top) / denom;
}

EmFit em_fit(std::span<const double> data, std::size_t components, const EmOptions& options) {
    check_data(data, components);
    EmFit best = run_em(data, block_initialization(data, components, options.min_stddev), options, "sorted-blocks");
    if (options.restarts > 0) {
        std::mt19937_64 rng(options.seed);
        for (std::size_t r = 0; r < options.restarts; ++r) {
            auto init = random_initialization(data, components, options.min_stddev, rng);
            try {
                EmFit candidate = run_em(data, std::move(init), options,
                                         "random-start-" + std::to_string(r + 1) + "-seed-" + std::to_string(options.seed));
                if (candidate.report.log_likelihood > best.report.log_likelihood) best = std::move(candidate);
            } catch (const runtime_failure&) {
                // degenerate restart; the deterministic fit still stands
            }
        }
    }
    return best;
}

double log_likelihood(const GaussianMixture& model, std::span<const double> data) {
    double ll = 0.0;
    for (double x : data) ll += model.log_pdf(x);
    return ll;
}

InformationCriteria information_criteria(const GaussianMixture& model, std::span<const double> data) {
    if (data.empty()) throw validation_error("information criteria need data");
    InformationCriteria ic;
    ic.log_likelihood = log_likelihood(model, data);
    if (!std::isfinite(ic.log_likelihood)) throw runtime_failure("log-likelihood is not finite");
    ic.free_parameters = free_parameter_count(model.size());
    const double p = static_cast<double>(ic.free_parameters);
    ic.aic = 2.0 * p - 2.0 * ic.log_likelihood;
    ic.bic = p * std::log(static_cast<double>(data.size())) - 2.0 * ic.log_likelihood;
    return ic;
}

ComponentSelection select_component_count(std::span<const double> data, std::size_t m_max, const EmOptions& options) {
    if (m_max == 0) throw validation_error("m_max must be at least 1");
    ComponentSelection sel;
    for (std::size_t m = 1; m <= m_max; ++m) sel.fits.push_back(em_fit(data, m, options));
    for (std::size_t i = 1; i < sel.fits.size(); ++i) {
        if (sel.fits[i].report.bic < sel.fits[sel.by_bic - 1].report.bic) sel.by_bic = i + 1;
        if (sel.fits[i].report.aic < sel.fits[sel.by_aic - 1].report.aic) sel.by_aic = i + 1;
    }
    sel.criteria_agree = sel.by_aic == sel.by_bic;
    return sel;
}

}  // namespace elicit
