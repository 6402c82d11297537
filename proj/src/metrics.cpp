#include "llsc/metrics.hpp"

#include <cmath>

namespace llsc {

ModulationParams::ModulationParams(double delta_, double zeta_) : delta(delta_), zeta(zeta_) {
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("ModulationParams: delta must lie in (0, 1]");
    if (!(zeta > 0.0) || !std::isfinite(zeta))
        throw std::invalid_argument("ModulationParams: zeta must be positive");
}

const char* method_name(Method m) {
    switch (m) {
        case Method::exact_h: return "exact_h";
        case Method::quadrature: return "quadrature";
        case Method::asymptotic: return "asymptotic";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "?";
}

double digamma_integer(int n) {
    if (n < 1) throw std::domain_error("digamma_integer: n must be a positive integer");
    double psi = -kEulerGamma;
    for (int k = 1; k < n; ++k) psi += 1.0 / k;
    return psi;
}

namespace {

double alpha_max(const ScModel& model) {
    double a = 0.0;
    for (const BranchParams& b : model.branches) a = std::max(a, b.alpha);
    return a;
}

std::vector<double> beta_vector(const ScModel& model) {
    std::vector<double> betas;
    for (const BranchParams& b : model.branches) betas.push_back(b.beta);
    return betas;
}

std::vector<double> unit_slope(int L, int axis) {
    std::vector<double> v(L, 0.0);
    v[axis] = 1.0;
    return v;
}

void require_iid(const ScModel& model, const char* who) {
    if (!model.iid()) throw std::invalid_argument(std::string(who) + ": model is not i.i.d.");
}

} // namespace

// --- outage -----------------------------------------------------------

MetricResult outage(const ScModel& model, double gamma_th) {
    if (!(gamma_th > 0.0)) throw std::domain_error("outage: gamma_th must be positive");
    const double p = cdf_sc_elementary(gamma_th, model);
    return {p, Method::quadrature, 8.0 * 1e-16 * model.num_branches() * p};
}

MetricResult outage_foxh(const ScModel& model, double gamma_th,
                         const std::optional<mb::ContourPlan>& plan) {
    if (!(gamma_th > 0.0)) throw std::domain_error("outage_foxh: gamma_th must be positive");
    const mb::EvalResult r = cdf_sc_foxh(gamma_th, model, plan);
    return {r.value, Method::exact_h, r.error_estimate};
}

MetricResult outage_asymptotic(const ScModel& model, double gamma_th) {
    if (!(gamma_th > 0.0)) throw std::domain_error("outage_asymptotic: gamma_th must be positive");
    return {cdf_sc_asymptotic(gamma_th, model), Method::asymptotic, 0.0};
}

// --- average BER ------------------------------------------------------

MetricResult ber_quadrature(const ScModel& model, const ModulationParams& mod) {
    auto integrand = [&](double g) {
        return mod.delta * std::erfc(std::sqrt(mod.zeta * g)) * pdf_sc_elementary(g, model);
    };
    const QuadResult q = integrate_semi_infinite(integrand, model.rho * alpha_max(model));
    return {q.value, Method::quadrature, q.error};
}

mb::FoxHSpec ber_contour_spec(const ScModel& model, const ModulationParams& mod) {
    const int L = model.num_branches();
    mb::FoxHSpec spec;
    spec.num_vars = L;
    for (int l = 0; l < L; ++l) {
        const BranchParams& b = model.branches[l];
        spec.log_arguments.push_back(
            -b.beta * (std::log(mod.zeta) + std::log(model.rho) + std::log(b.alpha)));
        spec.factors.push_back(mb::num_left(0.0, unit_slope(L, l)));
        spec.factors.push_back(mb::num_right(0.0, unit_slope(L, l)));
    }
    spec.factors.push_back(mb::num_left(0.5, beta_vector(model))); // Gamma(1/2 + sum beta_l s_l)
    return spec;
}

MetricResult ber_exact_inid(const ScModel& model, const ModulationParams& mod,
                            const std::optional<mb::ContourPlan>& plan) {
    const mb::FoxHSpec spec = ber_contour_spec(model, mod);
    const mb::ContourPlan p = plan ? *plan : mb::plan_contour(spec);
    const mb::EvalResult r = mb::eval_foxh(spec, p);
    const double pref = mod.delta / std::sqrt(kPi);
    return {pref * r.value, Method::exact_h, pref * r.error_estimate};
}

mb::FoxHSpec iid_ber_spec(const ScModel& model, const ModulationParams& mod) {
    require_iid(model, "iid_ber_spec");
    const BranchParams& b = model.branches.front();
    const double L = static_cast<double>(model.num_branches());
    mb::FoxHSpec spec;
    spec.num_vars = 1;
    spec.log_arguments = {
        -b.beta * (std::log(mod.zeta) + std::log(model.rho) + std::log(b.alpha))};
    spec.factors.push_back(mb::num_left(0.0, {1.0}));      // Gamma(u)
    spec.factors.push_back(mb::num_right(1.0 - L, {1.0})); // Gamma(L - u)
    spec.factors.push_back(mb::num_left(0.5, {b.beta}));   // Gamma(1/2 + beta u)
    return spec;
}

MetricResult ber_exact_iid(const ScModel& model, const ModulationParams& mod,
                           const std::optional<mb::ContourPlan>& plan) {
    require_iid(model, "ber_exact_iid");
    const mb::FoxHSpec spec = iid_ber_spec(model, mod);
    const mb::ContourPlan p = plan ? *plan : mb::plan_contour(spec);
    const mb::EvalResult r = mb::eval_foxh(spec, p);
    const double pref =
        mod.delta / (std::sqrt(kPi) * std::tgamma(static_cast<double>(model.num_branches())));
    return {pref * r.value, Method::exact_h, pref * r.error_estimate};
}

MetricResult ber_asymptotic(const ScModel& model, const ModulationParams& mod) {
    const auto [s, phi] = asymptotic_constants(model);
    const double lnv = std::log(mod.delta) - 0.5 * std::log(kPi) - s * std::log(mod.zeta) +
                       std::log(phi) + std::lgamma(0.5 + s) - s * std::log(model.rho);
    return {std::exp(lnv), Method::asymptotic, 0.0};
}

double diversity_order(const ScModel& model) { return asymptotic_constants(model).s_beta; }

// --- ergodic capacity ---------------------------------------------------

MetricResult capacity_quadrature(const ScModel& model) {
    auto integrand = [&](double g) { return std::log1p(g) * pdf_sc_elementary(g, model); };
    const QuadResult q = integrate_semi_infinite(integrand, model.rho * alpha_max(model));
    const double ln2 = std::log(2.0);
    return {q.value / ln2, Method::quadrature, q.error / ln2};
}

mb::FoxHSpec capacity_contour_spec(const ScModel& model) {
    const int L = model.num_branches();
    mb::FoxHSpec spec;
    spec.num_vars = L;
    for (int l = 0; l < L; ++l) {
        const BranchParams& b = model.branches[l];
        spec.log_arguments.push_back(-b.beta * (std::log(model.rho) + std::log(b.alpha)));
        spec.factors.push_back(mb::num_left(0.0, unit_slope(L, l)));
        spec.factors.push_back(mb::num_right(0.0, unit_slope(L, l)));
    }
    // Gamma(1+z)^2 Gamma(-z)^2 / (Gamma(z) Gamma(1-z)), z = sum beta_l s_l;
    // the evaluator pre-simplifies this composite to pi/sin(pi z).
    const std::vector<double> betas = beta_vector(model);
    std::vector<double> neg_betas = betas;
    for (double& x : neg_betas) x = -x;
    spec.factors.push_back(mb::num_left(1.0, betas));
    spec.factors.push_back(mb::num_left(1.0, betas));
    spec.factors.push_back(mb::num_right(1.0, betas)); // Gamma(-z)
    spec.factors.push_back(mb::num_right(1.0, betas)); // Gamma(-z)
    spec.factors.push_back(mb::denom(0.0, betas));     // Gamma(z)
    spec.factors.push_back(mb::denom(1.0, neg_betas)); // Gamma(1-z)
    return spec;
}

MetricResult capacity_exact_inid(const ScModel& model, const std::optional<mb::ContourPlan>& plan) {
    const mb::FoxHSpec spec = capacity_contour_spec(model);
    const mb::ContourPlan p = plan ? *plan : mb::plan_contour(spec);
    const mb::EvalResult r = mb::eval_foxh(spec, p);
    const double ln2 = std::log(2.0);
    return {r.value / ln2, Method::exact_h, r.error_estimate / ln2};
}

mb::FoxHSpec iid_capacity_spec(const ScModel& model) {
    require_iid(model, "iid_capacity_spec");
    const BranchParams& b = model.branches.front();
    const double L = static_cast<double>(model.num_branches());
    mb::FoxHSpec spec;
    spec.num_vars = 1;
    spec.log_arguments = {-b.beta * (std::log(model.rho) + std::log(b.alpha))};
    spec.factors.push_back(mb::num_left(0.0, {1.0}));      // Gamma(u)
    spec.factors.push_back(mb::num_right(1.0 - L, {1.0})); // Gamma(L - u)
    spec.factors.push_back(mb::num_left(1.0, {b.beta}));
    spec.factors.push_back(mb::num_left(1.0, {b.beta}));
    spec.factors.push_back(mb::num_right(1.0, {b.beta}));
    spec.factors.push_back(mb::num_right(1.0, {b.beta}));
    spec.factors.push_back(mb::denom(0.0, {b.beta}));
    spec.factors.push_back(mb::denom(1.0, {-b.beta}));
    return spec;
}

MetricResult capacity_exact_iid(const ScModel& model, const std::optional<mb::ContourPlan>& plan) {
    require_iid(model, "capacity_exact_iid");
    const mb::FoxHSpec spec = iid_capacity_spec(model);
    const mb::ContourPlan p = plan ? *plan : mb::plan_contour(spec);
    const mb::EvalResult r = mb::eval_foxh(spec, p);
    const double pref =
        1.0 / (std::log(2.0) * std::tgamma(static_cast<double>(model.num_branches())));
    return {pref * r.value, Method::exact_h, pref * r.error_estimate};
}

MetricResult capacity_asymptotic_iid(const ScModel& model) {
    require_iid(model, "capacity_asymptotic_iid");
    const BranchParams& b = model.branches.front();
    const double ln2 = std::log(2.0);
    const double value =
        std::log2(model.rho) +
        (b.beta * std::log(b.alpha) + kEulerGamma + digamma_integer(model.num_branches())) /
            (b.beta * ln2);
    return {value, Method::asymptotic, 0.0};
}

double moment_iid(const ScModel& model, double n) {
    require_iid(model, "moment_iid");
    const BranchParams& b = model.branches.front();
    const double L = static_cast<double>(model.num_branches());
    if (n == 0.0) return 1.0;
    if (!(n < b.beta))
        throw std::domain_error(
            "moment_iid: E[gamma^n] diverges for n >= beta (Gamma((beta-n)/beta) pole)");
    if (!(n > -b.beta * L))
        throw std::domain_error("moment_iid: E[gamma^n] diverges for n <= -beta*L");
    const double lnv = n * (std::log(model.rho) + std::log(b.alpha)) +
                       std::lgamma((b.beta - n) / b.beta) + std::lgamma(L + n / b.beta) -
                       std::lgamma(L);
    return std::exp(lnv);
}

double ber_kernel_second_moment(const ScModel& model, const ModulationParams& mod) {
    auto integrand = [&](double g) {
        const double k = mod.delta * std::erfc(std::sqrt(mod.zeta * g));
        return k * k * pdf_sc_elementary(g, model);
    };
    return integrate_semi_infinite(integrand, model.rho * alpha_max(model), 1e-8).value;
}

double capacity_kernel_second_moment(const ScModel& model) {
    const double ln2 = std::log(2.0);
    auto integrand = [&](double g) {
        const double k = std::log1p(g) / ln2;
        return k * k * pdf_sc_elementary(g, model);
    };
    return integrate_semi_infinite(integrand, model.rho * alpha_max(model), 1e-8).value;
}

} // namespace llsc
