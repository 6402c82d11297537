#include "llsc/sc_stats.hpp"

#include <cmath>

namespace llsc {

ScModel::ScModel(std::vector<BranchParams> branches_, double rho_)
    : branches(std::move(branches_)), rho(rho_) {
    if (branches.empty()) throw std::invalid_argument("ScModel: at least one branch required");
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("ScModel: rho must be positive");
}

bool ScModel::iid() const {
    for (const BranchParams& b : branches)
        if (b.alpha != branches.front().alpha || b.beta != branches.front().beta) return false;
    return true;
}

double cdf_sc_elementary(double gamma, const ScModel& model) {
    double f = 1.0;
    for (const BranchParams& b : model.branches) f *= cdf_snr(gamma, b, model.rho);
    return f;
}

double pdf_sc_elementary(double gamma, const ScModel& model) {
    if (!(gamma > 0.0)) throw std::domain_error("pdf_sc_elementary: gamma must be positive");
    const int L = model.num_branches();
    std::vector<double> cdfs(L);
    for (int l = 0; l < L; ++l) cdfs[l] = cdf_snr(gamma, model.branches[l], model.rho);
    double f = 0.0;
    for (int l = 0; l < L; ++l) {
        double term = pdf_snr(gamma, model.branches[l], model.rho);
        for (int k = 0; k < L; ++k)
            if (k != l) term *= cdfs[k];
        f += term;
    }
    return f;
}

AsymptoticConstants asymptotic_constants(const ScModel& model) {
    double s_beta = 0.0, log_phi = 0.0;
    for (const BranchParams& b : model.branches) {
        s_beta += b.beta;
        log_phi -= b.beta * std::log(b.alpha);
    }
    return {s_beta, std::exp(log_phi)};
}

double cdf_sc_asymptotic(double gamma, const ScModel& model) {
    if (gamma < 0.0 || std::isnan(gamma))
        throw std::domain_error("cdf_sc_asymptotic: gamma must be nonnegative");
    if (gamma == 0.0) return 0.0;
    const auto [s, phi] = asymptotic_constants(model);
    return std::exp(std::log(phi) + s * (std::log(gamma) - std::log(model.rho)));
}

double pdf_sc_asymptotic(double gamma, const ScModel& model) {
    if (!(gamma > 0.0)) throw std::domain_error("pdf_sc_asymptotic: gamma must be positive");
    const auto [s, phi] = asymptotic_constants(model);
    return std::exp(std::log(phi) + std::log(s) - s * std::log(model.rho) +
                    (s - 1.0) * std::log(gamma));
}

namespace {

std::vector<double> log_args(double gamma, const ScModel& model) {
    std::vector<double> lx;
    lx.reserve(model.branches.size());
    for (const BranchParams& b : model.branches)
        lx.push_back(b.beta * (std::log(gamma) - std::log(model.rho) - std::log(b.alpha)));
    return lx;
}

std::vector<double> beta_vector(const ScModel& model) {
    std::vector<double> betas;
    betas.reserve(model.branches.size());
    for (const BranchParams& b : model.branches) betas.push_back(b.beta);
    return betas;
}

std::vector<double> unit_slope(int L, int axis) {
    std::vector<double> v(L, 0.0);
    v[axis] = 1.0;
    return v;
}

} // namespace

mb::FoxHSpec sc_cdf_spec(double gamma, const ScModel& model) {
    if (!(gamma > 0.0)) throw std::domain_error("sc_cdf_spec: gamma must be positive");
    const int L = model.num_branches();
    mb::FoxHSpec spec;
    spec.num_vars = L;
    spec.log_arguments = log_args(gamma, model);
    for (int l = 0; l < L; ++l) {
        spec.factors.push_back(mb::num_left(0.0, unit_slope(L, l)));  // Gamma(s_l)
        spec.factors.push_back(mb::num_right(0.0, unit_slope(L, l))); // Gamma(1 - s_l)
    }
    return spec;
}

mb::FoxHSpec sc_pdf_spec(double gamma, const ScModel& model) {
    mb::FoxHSpec spec = sc_cdf_spec(gamma, model);
    const std::vector<double> betas = beta_vector(model);
    // Gamma(1 + sum beta_l s_l) / Gamma(sum beta_l s_l), i.e. the derivative factor
    spec.factors.push_back(mb::num_left(1.0, betas));
    spec.factors.push_back(mb::denom(0.0, betas));
    return spec;
}

mb::FoxHSpec iid_cdf_meijer_spec(const ScModel& model) {
    if (!model.iid()) throw std::invalid_argument("iid_cdf_meijer_spec: model is not i.i.d.");
    const double L = static_cast<double>(model.num_branches());
    mb::FoxHSpec spec;
    spec.num_vars = 1;
    spec.log_arguments = {0.0};
    spec.factors.push_back(mb::num_left(0.0, {1.0}));     // Gamma(s)
    spec.factors.push_back(mb::num_right(1.0 - L, {1.0})); // Gamma(L - s)
    return spec;
}

mb::EvalResult cdf_sc_foxh(double gamma, const ScModel& model,
                           const std::optional<mb::ContourPlan>& plan) {
    const mb::FoxHSpec spec = sc_cdf_spec(gamma, model);
    const mb::ContourPlan p = plan ? *plan : mb::plan_contour(spec);
    return mb::eval_foxh(spec, p);
}

mb::EvalResult pdf_sc_foxh(double gamma, const ScModel& model,
                           const std::optional<mb::ContourPlan>& plan) {
    const mb::FoxHSpec spec = sc_pdf_spec(gamma, model);
    const mb::ContourPlan p = plan ? *plan : mb::plan_contour(spec);
    mb::EvalResult r = mb::eval_foxh(spec, p);
    r.value /= gamma;
    r.error_estimate /= gamma;
    return r;
}

double cdf_sc_iid_meijer(double gamma, const ScModel& model) {
    if (!model.iid()) throw std::invalid_argument("cdf_sc_iid_meijer: model is not i.i.d.");
    if (!(gamma > 0.0)) throw std::domain_error("cdf_sc_iid_meijer: gamma must be positive");
    const BranchParams& b = model.branches.front();
    const double z =
        std::exp(b.beta * (std::log(gamma) - std::log(model.rho) - std::log(b.alpha)));
    const mb::EvalResult g = mb::eval_meijer_g(iid_cdf_meijer_spec(model), z);
    return g.value / std::tgamma(static_cast<double>(model.num_branches()));
}

std::vector<double> snr_grid(const ScModel& model, int points) {
    double alpha_max = 0.0;
    for (const BranchParams& b : model.branches) alpha_max = std::max(alpha_max, b.alpha);
    const double scale = model.rho * alpha_max;
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        const double u = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        grid[i] = scale * std::pow(10.0, -2.0 + 4.0 * u);
    }
    return grid;
}

} // namespace llsc
