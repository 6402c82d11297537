#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "llsc/common.hpp"

namespace llsc::mb {

/// Principal-branch complex log-gamma (Lanczos approximation plus reflection).
/// Throws std::domain_error at the poles z = 0, -1, -2, ...
std::complex<double> log_gamma(std::complex<double> z);

/// log sin(pi z), computed in a form that never overflows for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z);

enum class Orientation {
    numerator_left,  // Gamma(offset + slopes.s), poles on the left of the contour
    numerator_right, // Gamma(1 - offset - slopes.s), poles on the right
    denominator,     // 1 / Gamma(offset + slopes.s)
};

struct GammaFactor {
    double offset = 0.0;
    std::vector<double> slopes; // one coefficient per integration variable
    Orientation orientation = Orientation::numerator_left;
};

inline GammaFactor num_left(double offset, std::vector<double> slopes) {
    return {offset, std::move(slopes), Orientation::numerator_left};
}
inline GammaFactor num_right(double a, std::vector<double> slopes) {
    return {a, std::move(slopes), Orientation::numerator_right};
}
inline GammaFactor denom(double offset, std::vector<double> slopes) {
    return {offset, std::move(slopes), Orientation::denominator};
}

/// A (possibly multivariate) Fox H-type integrand: a product of gamma factors
/// under an L-fold Mellin-Barnes integral, with argument x_l raised to s_l.
struct FoxHSpec {
    int num_vars = 1;
    std::vector<GammaFactor> factors;
    std::vector<double> log_arguments; // ln x_l, arguments strictly positive
    void validate() const;
};

/// One residue correction: the contour crossed a pole at s_l = pole_location for
/// every variable NOT in keep_variables; the correction is the lower-dimensional
/// tube integral over the kept variables.
struct ResidueCorrection {
    std::vector<int> keep_variables;
    double pole_location = 0.0;
};

struct ContourPlan {
    std::vector<double> abscissas;
    std::vector<double> half_widths; // imaginary-axis truncation per variable
    int panels_per_axis = 2;         // 16-point Gauss-Legendre panels per axis
    int max_refinements = 3;
    double target_tol = 1e-9; // relative refinement target
    std::vector<ResidueCorrection> residue_corrections;
    std::string note; // set when a factor's pole sides could not be separated
    int nodes_per_axis() const { return 16 * panels_per_axis; }
};

struct EvalResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double imag_over_real = 0.0; // residual |Im|/|Re| of the quadrature sum
};

struct EvalOptions {
    bool force_tensor = false; // disable the separable fast path (diagnostics)
};

/// Chooses contour abscissas that separate left from right poles for every
/// factor, truncation half-widths from the integrand's decay envelope, and
/// panel counts from its oscillation frequency. When a composite factor's
/// convergence strip conflicts with the per-variable pole separation (the
/// reciprocal-sine kernel of the capacity integrand), the abscissas shift
/// negative and the crossed s_l = 0 poles are recorded as residue corrections.
ContourPlan plan_contour(const FoxHSpec& spec, const std::vector<double>& abscissa_hint = {});

/// Tensor-product contour quadrature of the L-fold Mellin-Barnes integral
/// (1/2*pi*j)^L * integral of [gamma factors] * prod x_l^{s_l} ds.
EvalResult eval_foxh(const FoxHSpec& spec, const ContourPlan& plan, const EvalOptions& opts = {});

/// Meijer G evaluation: a univariate spec whose slopes are all +-1, argument z.
EvalResult eval_meijer_g(const FoxHSpec& spec, double z);

/// Max relative deviation of Gamma(s)Gamma(1-s) from pi/sin(pi s) over the
/// plan's contour nodes (debug-mode internal consistency check).
double verify_reflection_identity(const ContourPlan& plan);

/// Restriction of a spec to a subset of its variables with the others pinned
/// at s = 0 (used by the residue machinery; exposed for tests).
FoxHSpec restrict_spec(const FoxHSpec& spec, const std::vector<int>& keep_variables);

} // namespace llsc::mb
