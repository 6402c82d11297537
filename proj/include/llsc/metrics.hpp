#pragma once

#include <limits>
#include <optional>

#include "llsc/quadrature.hpp"
#include "llsc/sc_stats.hpp"

namespace llsc {

/// Modulation-dependent BER kernel parameters of delta*erfc(sqrt(zeta*gamma)).
/// Defaults are an OOK IM-DD convention (Pe = 0.5*erfc(sqrt(gamma)/2)).
struct ModulationParams {
    double delta = 0.5;
    double zeta = 0.25;
    ModulationParams() = default;
    ModulationParams(double delta, double zeta);
};

enum class Method { exact_h, quadrature, asymptotic, monte_carlo };

const char* method_name(Method m);

struct MetricResult {
    double value = 0.0;
    Method method = Method::quadrature;
    double error_estimate = 0.0;
    bool degenerate = false; // Monte Carlo only: zero-variance estimate
    double tail_max = std::numeric_limits<double>::quiet_NaN(); // MC capacity: largest SNR sample
};

// --- outage -----------------------------------------------------------
MetricResult outage(const ScModel& model, double gamma_th);
MetricResult outage_foxh(const ScModel& model, double gamma_th,
                         const std::optional<mb::ContourPlan>& plan = std::nullopt);
MetricResult outage_asymptotic(const ScModel& model, double gamma_th);

// --- average BER ------------------------------------------------------
MetricResult ber_quadrature(const ScModel& model, const ModulationParams& mod);
MetricResult ber_exact_inid(const ScModel& model, const ModulationParams& mod,
                            const std::optional<mb::ContourPlan>& plan = std::nullopt);
MetricResult ber_exact_iid(const ScModel& model, const ModulationParams& mod,
                           const std::optional<mb::ContourPlan>& plan = std::nullopt);
MetricResult ber_asymptotic(const ScModel& model, const ModulationParams& mod);

double diversity_order(const ScModel& model);

// --- ergodic capacity (bits/s/Hz) --------------------------------------
MetricResult capacity_quadrature(const ScModel& model);
MetricResult capacity_exact_inid(const ScModel& model,
                                 const std::optional<mb::ContourPlan>& plan = std::nullopt);
MetricResult capacity_exact_iid(const ScModel& model,
                                const std::optional<mb::ContourPlan>& plan = std::nullopt);
MetricResult capacity_asymptotic_iid(const ScModel& model);

/// n-th moment of the i.i.d. SC output SNR,
/// rho^n alpha^n Gamma((beta-n)/beta) Gamma((beta L+n)/beta) / Gamma(L),
/// finite on -beta*L < n < beta only.
double moment_iid(const ScModel& model, double n);

// contour-integral specs (exposed for tests and cross-validation)
mb::FoxHSpec ber_contour_spec(const ScModel& model, const ModulationParams& mod);
mb::FoxHSpec capacity_contour_spec(const ScModel& model);
mb::FoxHSpec iid_ber_spec(const ScModel& model, const ModulationParams& mod);
mb::FoxHSpec iid_capacity_spec(const ScModel& model);

/// Second moments of the BER / capacity kernels under the SC density; used to
/// bound the true sampling standard error of the Monte Carlo estimators.
double ber_kernel_second_moment(const ScModel& model, const ModulationParams& mod);
double capacity_kernel_second_moment(const ScModel& model);

double digamma_integer(int n); // digamma at positive integer arguments

} // namespace llsc
