#include "llsc/loglogistic.hpp"

#include <cmath>

namespace llsc {

AmplitudeParams::AmplitudeParams(double scale_prime_, double shape_prime_)
    : scale_prime(scale_prime_), shape_prime(shape_prime_) {
    if (!(scale_prime > 0.0) || !std::isfinite(scale_prime))
        throw std::invalid_argument("AmplitudeParams: scale_prime must be positive");
    if (!(shape_prime > 0.0) || !std::isfinite(shape_prime))
        throw std::invalid_argument("AmplitudeParams: shape_prime must be positive");
}

BranchParams::BranchParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("BranchParams: alpha must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("BranchParams: beta must be positive");
}

BranchParams from_amplitude(const AmplitudeParams& p) {
    return BranchParams(p.scale_prime * p.scale_prime, p.shape_prime / 2.0);
}

namespace {

void check_rho(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("rho must be positive");
}

// t = beta * ln(gamma / (rho*alpha)), computed without forming the ratio.
double log_ratio_t(double gamma, const BranchParams& p, double rho) {
    return p.beta * (std::log(gamma) - std::log(rho) - std::log(p.alpha));
}

} // namespace

double cdf_snr(double gamma, const BranchParams& p, double rho) {
    check_rho(rho);
    if (gamma < 0.0 || std::isnan(gamma))
        throw std::domain_error("cdf_snr: gamma must be nonnegative");
    if (gamma == 0.0) return 0.0;
    const double t = log_ratio_t(gamma, p, rho);
    if (t <= 0.0) {
        const double e = std::exp(t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(-t));
}

double pdf_snr(double gamma, const BranchParams& p, double rho) {
    check_rho(rho);
    if (!(gamma > 0.0))
        throw std::domain_error("pdf_snr: gamma must be positive");
    // beta * r^beta / (gamma * (1 + r^beta)^2) with r = gamma/(rho*alpha),
    // written via the logistic sigmoid of t = beta*ln(r): f = beta*F*(1-F)/gamma.
    const double t = log_ratio_t(gamma, p, rho);
    const double e = std::exp(-std::abs(t));
    const double sig_product = e / ((1.0 + e) * (1.0 + e)); // F(t)*(1-F(t))
    return p.beta * sig_product / gamma;
}

double quantile_snr(double u, const BranchParams& p, double rho) {
    check_rho(rho);
    if (!(u > 0.0) || !(u < 1.0))
        throw std::domain_error("quantile_snr: u must lie in (0,1)");
    return rho * p.alpha * std::exp((std::log(u) - std::log1p(-u)) / p.beta);
}

double sample_snr(std::mt19937_64& rng, const BranchParams& p, double rho) {
    return quantile_snr(detail::open_unit(rng), p, rho);
}

double moment_snr(const BranchParams& p, double rho, double n) {
    check_rho(rho);
    if (n == 0.0) return 1.0;
    if (!(n < p.beta) || !(n > -p.beta))
        throw std::domain_error(
            "moment_snr: E[gamma^n] diverges for |n| >= beta (Gamma(1 -+ n/beta) pole)");
    // E[gamma^n] = (rho*alpha)^n * Gamma(1+n/beta) * Gamma(1-n/beta)
    const double r = n / p.beta;
    return std::pow(rho * p.alpha, n) * std::exp(std::lgamma(1.0 + r) + std::lgamma(1.0 - r));
}

} // namespace llsc
