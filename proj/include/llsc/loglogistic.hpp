#pragma once

#include <random>

#include "llsc/common.hpp"

namespace llsc {

/// Amplitude-domain log-logistic parameters (alpha', beta').
struct AmplitudeParams {
    double scale_prime;
    double shape_prime;
    AmplitudeParams(double scale_prime, double shape_prime);
};

/// SNR-domain log-logistic parameters of one diversity branch.
/// The branch SNR is distributed LL(rho * alpha, beta) for average transmit SNR rho.
struct BranchParams {
    double alpha;
    double beta;
    BranchParams(double alpha, double beta);
};

/// SNR-domain parameters of a branch with LL(alpha', beta') fading amplitude:
/// alpha = alpha'^2, beta = beta'/2.
BranchParams from_amplitude(const AmplitudeParams& p);

/// CDF of the branch SNR, 1 / (1 + (gamma/(rho*alpha))^(-beta)).
/// Evaluated as a logistic in the log domain so extreme gamma never overflows.
double cdf_snr(double gamma, const BranchParams& p, double rho);

/// Density of the branch SNR, gamma > 0.
double pdf_snr(double gamma, const BranchParams& p, double rho);

/// Inverse CDF: rho*alpha*(u/(1-u))^(1/beta), u in (0,1).
double quantile_snr(double u, const BranchParams& p, double rho);

/// One inverse-transform draw from the branch SNR distribution.
double sample_snr(std::mt19937_64& rng, const BranchParams& p, double rho);

/// n-th raw moment of the branch SNR. Finite only for -beta < n < beta;
/// outside that strip the defining integral diverges and a domain_error is raised.
double moment_snr(const BranchParams& p, double rho, double n);

namespace detail {
// Uniform draw in the open interval (0,1); all 2^64 engine outputs map inside.
inline double open_unit(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}
} // namespace detail

} // namespace llsc
