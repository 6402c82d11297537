#pragma once

#include <optional>
#include <vector>

#include "llsc/loglogistic.hpp"
#include "llsc/mellin_barnes.hpp"

namespace llsc {

/// L-branch selection-combining receiver model: independent log-logistic
/// branch SNRs gamma_l ~ LL(rho*alpha_l, beta_l), output max{gamma_1..gamma_L}.
struct ScModel {
    std::vector<BranchParams> branches;
    double rho; // average transmit SNR, linear scale
    ScModel(std::vector<BranchParams> branches, double rho);
    int num_branches() const { return static_cast<int>(branches.size()); }
    bool iid() const; // exact parameter equality across branches
};

struct AsymptoticConstants {
    double s_beta; // sum of branch betas
    double phi;    // prod alpha_l^(-beta_l)
};

/// Product of the per-branch SNR CDFs (closed form, the reference path).
double cdf_sc_elementary(double gamma, const ScModel& model);

/// Density of the SC output SNR via the product rule on the elementary CDF.
double pdf_sc_elementary(double gamma, const ScModel& model);

AsymptoticConstants asymptotic_constants(const ScModel& model);

/// High-SNR asymptote phi * rho^-S * gamma^S of the SC CDF.
double cdf_sc_asymptotic(double gamma, const ScModel& model);
double pdf_sc_asymptotic(double gamma, const ScModel& model);

/// Multivariate H-function specs for the SC CDF / PDF contour integrals.
mb::FoxHSpec sc_cdf_spec(double gamma, const ScModel& model);
mb::FoxHSpec sc_pdf_spec(double gamma, const ScModel& model);

/// Univariate Meijer G spec of the i.i.d. SC CDF (argument supplied at eval).
mb::FoxHSpec iid_cdf_meijer_spec(const ScModel& model);

/// SC CDF via the L-variate H-function contour integral.
mb::EvalResult cdf_sc_foxh(double gamma, const ScModel& model,
                           const std::optional<mb::ContourPlan>& plan = std::nullopt);

/// SC PDF via the L-fold contour integral with the derivative composite factor.
mb::EvalResult pdf_sc_foxh(double gamma, const ScModel& model,
                           const std::optional<mb::ContourPlan>& plan = std::nullopt);

/// i.i.d. SC CDF through the Meijer G route, (1/Gamma(L)) * G.
double cdf_sc_iid_meijer(double gamma, const ScModel& model);

/// Self-test grid convention: log-spaced points on [0.01, 100]*rho*max(alpha).
std::vector<double> snr_grid(const ScModel& model, int points = 20);

} // namespace llsc
