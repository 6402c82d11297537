#include "llsc/mellin_barnes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "parallel.hpp"

namespace llsc::mb {

using cd = std::complex<double>;

namespace {

constexpr double kLn2Pi = 1.83787706640934548356065947281;

// Lanczos g=7, 9-term coefficients.
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cd lanczos_log_gamma(cd z) {
    // valid for Re z >= 0.5
    z -= 1.0;
    cd x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cd t = z + 7.5;
    return 0.5 * kLn2Pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

} // namespace

std::complex<double> log_sin_pi(std::complex<double> z) {
    const double y = z.imag();
    if (std::abs(y) < 1.0) return std::log(std::sin(kPi * z));
    if (y > 0.0) {
        // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}), |e^{2 i pi z}| = e^{-2 pi y} < 1
        const cd w = std::exp(cd(0.0, 2.0 * kPi) * z);
        return cd(0.0, -kPi) * z + cd(-std::log(2.0), 0.5 * kPi) + std::log(1.0 - w);
    }
    return std::conj(log_sin_pi(std::conj(z)));
}

std::complex<double> log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0) {
        const double x = z.real();
        if (x <= 0.0 && x == std::floor(x))
            throw std::domain_error("log_gamma: pole at nonpositive integer");
    }
    if (z.real() >= 0.5) return lanczos_log_gamma(z);
    // reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1-z)
    return std::log(kPi) - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
}

void FoxHSpec::validate() const {
    if (num_vars < 1) throw std::invalid_argument("FoxHSpec: num_vars must be >= 1");
    if (static_cast<int>(log_arguments.size()) != num_vars)
        throw std::invalid_argument("FoxHSpec: log_arguments size mismatch");
    for (double lx : log_arguments)
        if (!std::isfinite(lx)) throw std::invalid_argument("FoxHSpec: non-finite log argument");
    for (const GammaFactor& f : factors) {
        if (static_cast<int>(f.slopes.size()) != num_vars)
            throw std::invalid_argument("FoxHSpec: factor slope vector length != num_vars");
        if (!std::isfinite(f.offset)) throw std::invalid_argument("FoxHSpec: non-finite offset");
        for (double a : f.slopes)
            if (!std::isfinite(a)) throw std::invalid_argument("FoxHSpec: non-finite slope");
    }
}

FoxHSpec restrict_spec(const FoxHSpec& spec, const std::vector<int>& keep) {
    spec.validate();
    FoxHSpec out;
    out.num_vars = static_cast<int>(keep.size());
    for (int v : keep) {
        if (v < 0 || v >= spec.num_vars) throw std::invalid_argument("restrict_spec: bad variable");
        out.log_arguments.push_back(spec.log_arguments[v]);
    }
    for (const GammaFactor& f : spec.factors) {
        GammaFactor g;
        g.offset = f.offset;
        g.orientation = f.orientation;
        bool nonzero = false;
        for (int v : keep) {
            g.slopes.push_back(f.slopes[v]);
            if (f.slopes[v] != 0.0) nonzero = true;
        }
        // Factors living entirely on pinned variables contribute the residue
        // value 1 of their Gamma(s)Gamma(1-s) pair and are dropped.
        if (nonzero) out.factors.push_back(std::move(g));
    }
    return out;
}

namespace {

// ----------------------------------------------------------------------
// realized integrand
// ----------------------------------------------------------------------

struct RFactor {
    double offset;
    std::vector<double> slopes;
    bool numerator;
};

enum class KType { gamma_fn, recip_sin, linear };

struct Kernel {
    KType type = KType::gamma_fn;
    double offset = 0.0;
    std::vector<double> slopes;
    bool numerator = true;
    double strip_lo = -std::numeric_limits<double>::infinity();
    double strip_hi = std::numeric_limits<double>::infinity();
    int axis = -1; // >= 0 when the slope vector touches a single variable
};

int single_axis_of(const std::vector<double>& slopes) {
    int axis = -1;
    for (int i = 0; i < static_cast<int>(slopes.size()); ++i) {
        if (slopes[i] != 0.0) {
            if (axis >= 0) return -1;
            axis = i;
        }
    }
    return axis;
}

struct Integrand {
    int L = 1;
    std::vector<std::vector<RFactor>> axis_factors;
    std::vector<Kernel> kernels; // axis >= 0: folded per-axis; axis == -1: coupled
    std::vector<double> logx;
};

RFactor realize(const GammaFactor& f) {
    switch (f.orientation) {
        case Orientation::numerator_left:
            return {f.offset, f.slopes, true};
        case Orientation::numerator_right: {
            RFactor r{1.0 - f.offset, f.slopes, true};
            for (double& a : r.slopes) a = -a;
            return r;
        }
        case Orientation::denominator:
            return {f.offset, f.slopes, false};
    }
    throw std::logic_error("realize: bad orientation");
}

bool slopes_equal(const std::vector<double>& a, const std::vector<double>& b, double sign) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != sign * b[i]) return false;
    return true;
}

// Recognize the two composite gamma patterns the integrands of this library
// produce and replace them with their closed forms before quadrature:
//   Gamma(1+z)/Gamma(z)                                  -> z
//   Gamma(1+z)^2 Gamma(-z)^2 / (Gamma(z) Gamma(1-z))     -> pi/sin(pi z)
// Matching is exact on offsets and slope vectors.
void extract_patterns(std::vector<RFactor>& fs, std::vector<Kernel>& kernels) {
    auto find = [&fs](double offset, const std::vector<double>& d, double sign, bool num,
                      const std::vector<std::size_t>& used) -> int {
        for (std::size_t i = 0; i < fs.size(); ++i) {
            if (std::find(used.begin(), used.end(), i) != used.end()) continue;
            if (fs[i].numerator == num && fs[i].offset == offset && slopes_equal(fs[i].slopes, d, sign))
                return static_cast<int>(i);
        }
        return -1;
    };

    // reciprocal sine sextet, keyed off each denominator Gamma(z)
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            if (fs[i].numerator || fs[i].offset != 0.0) continue;
            const std::vector<double>& d = fs[i].slopes;
            std::vector<std::size_t> used{i};
            const int n1 = find(1.0, d, +1.0, true, used);
            if (n1 < 0) continue;
            used.push_back(n1);
            const int n2 = find(1.0, d, +1.0, true, used);
            if (n2 < 0) continue;
            used.push_back(n2);
            const int m1 = find(0.0, d, -1.0, true, used);
            if (m1 < 0) continue;
            used.push_back(m1);
            const int m2 = find(0.0, d, -1.0, true, used);
            if (m2 < 0) continue;
            used.push_back(m2);
            const int dd = find(1.0, d, -1.0, false, used);
            if (dd < 0) continue;
            used.push_back(dd);

            Kernel k;
            k.type = KType::recip_sin;
            k.offset = 0.0;
            k.slopes = d;
            k.strip_lo = -1.0; // from Gamma(1+z)
            k.strip_hi = 0.0;  // from Gamma(-z)
            k.axis = single_axis_of(d);
            kernels.push_back(std::move(k));
            std::sort(used.begin(), used.end(), std::greater<>());
            for (std::size_t u : used) fs.erase(fs.begin() + static_cast<long>(u));
            changed = true;
            break;
        }
    }

    // linear pair Gamma(1+z)/Gamma(z)
    changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            if (fs[i].numerator || fs[i].offset != 0.0) continue;
            const std::vector<double>& d = fs[i].slopes;
            const int n1 = find(1.0, d, +1.0, true, {i});
            if (n1 < 0) continue;
            Kernel k;
            k.type = KType::linear;
            k.offset = 0.0;
            k.slopes = d;
            k.axis = single_axis_of(d);
            kernels.push_back(std::move(k));
            fs.erase(fs.begin() + std::max<std::size_t>(i, static_cast<std::size_t>(n1)));
            fs.erase(fs.begin() + std::min<std::size_t>(i, static_cast<std::size_t>(n1)));
            changed = true;
            break;
        }
    }
}

Integrand simplify(const FoxHSpec& spec) {
    Integrand ig;
    ig.L = spec.num_vars;
    ig.logx = spec.log_arguments;
    ig.axis_factors.resize(spec.num_vars);

    std::vector<RFactor> realized;
    realized.reserve(spec.factors.size());
    for (const GammaFactor& f : spec.factors) realized.push_back(realize(f));

    extract_patterns(realized, ig.kernels);

    for (RFactor& f : realized) {
        const int axis = single_axis_of(f.slopes);
        if (axis >= 0) {
            ig.axis_factors[axis].push_back(std::move(f));
        } else {
            Kernel k;
            k.type = KType::gamma_fn;
            k.offset = f.offset;
            k.slopes = f.slopes;
            k.numerator = f.numerator;
            if (f.numerator) k.strip_lo = 0.0; // contour stays right of the pole chain of Gamma(w)
            k.axis = -1;
            ig.kernels.push_back(std::move(k));
        }
    }
    return ig;
}

std::string describe_factor(const Kernel& k) {
    std::ostringstream os;
    const char* name = k.type == KType::gamma_fn ? "Gamma" : (k.type == KType::recip_sin ? "pi/sin(pi .)" : "linear");
    os << name << "(" << k.offset << " + [";
    for (std::size_t i = 0; i < k.slopes.size(); ++i) os << (i ? "," : "") << k.slopes[i];
    os << "].s)";
    return os.str();
}

// ----------------------------------------------------------------------
// contour planning
// ----------------------------------------------------------------------

struct AxisWindow {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    double lo_after_cross = -std::numeric_limits<double>::infinity(); // next pole past the one at `lo`
};

AxisWindow axis_window(const std::vector<RFactor>& fs, int axis) {
    AxisWindow w;
    for (const RFactor& f : fs) {
        if (!f.numerator) continue;
        const double a = f.slopes[axis];
        const double first = -f.offset / a;
        if (a > 0.0) {
            w.lo = std::max(w.lo, first);
            w.lo_after_cross = std::max(w.lo_after_cross, -(f.offset + 1.0) / a);
        } else {
            w.hi = std::min(w.hi, first);
        }
    }
    return w;
}

bool near_nonpositive_integer(double w) {
    if (w > 1e-9) return false;
    return std::abs(w - std::round(w)) < 1e-9;
}

bool near_integer(double w) { return std::abs(w - std::round(w)) < 1e-9; }

double nearest_pole_distance_gamma(double w) {
    // distance from w to the pole chain {0, -1, -2, ...}
    if (w > 0.0) return w;
    return std::min(w - std::floor(w), std::ceil(w) - w);
}

double nearest_integer_distance(double w) {
    return std::min(w - std::floor(w), std::ceil(w) - w);
}

double dot_c(const std::vector<double>& slopes, const std::vector<double>& c) {
    double r = 0.0;
    for (std::size_t i = 0; i < slopes.size(); ++i) r += slopes[i] * c[i];
    return r;
}

// Real-axis log magnitude of the integrand factor set of a univariate spec;
// minimized to place the abscissa where the contour peak is smallest.
double axis_log_magnitude(const Integrand& ig, double c) {
    double phi = c * ig.logx[0];
    for (const RFactor& f : ig.axis_factors[0]) {
        const double w = f.offset + f.slopes[0] * c;
        phi += (f.numerator ? 1.0 : -1.0) * std::lgamma(w);
    }
    for (const Kernel& k : ig.kernels) {
        const double w = k.offset + k.slopes[0] * c;
        switch (k.type) {
            case KType::gamma_fn:
                phi += (k.numerator ? 1.0 : -1.0) * std::lgamma(w);
                break;
            case KType::recip_sin:
                phi += std::log(kPi) - std::log(std::abs(std::sin(kPi * w)));
                break;
            case KType::linear:
                break; // polynomial factor, irrelevant to the scale
        }
    }
    return phi;
}

double golden_minimize(const std::function<double(double)>& f, double lo, double hi) {
    const double gr = 0.61803398874989484820;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 90 && (b - a) > 1e-12 * (std::abs(a) + std::abs(b) + 1.0); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

struct PlanInternals {
    std::vector<double> strip;  // per-axis distance from the contour to the nearest pole
    std::vector<double> rate;   // per-axis exponential decay rate of the envelope
    std::vector<double> omega;  // per-axis oscillation frequency bound
};

void check_poles_on_contour(const Integrand& ig, const std::vector<double>& c) {
    for (int l = 0; l < ig.L; ++l)
        for (const RFactor& f : ig.axis_factors[l]) {
            const double w = f.offset + f.slopes[l] * c[l];
            if (f.numerator && near_nonpositive_integer(w)) {
                Kernel k{KType::gamma_fn, f.offset, f.slopes, f.numerator};
                throw PlanError("plan_contour: pole on contour in factor " + describe_factor(k));
            }
        }
    for (const Kernel& k : ig.kernels) {
        const double w = k.offset + dot_c(k.slopes, c);
        if (k.type == KType::gamma_fn && k.numerator && near_nonpositive_integer(w))
            throw PlanError("plan_contour: pole on contour in factor " + describe_factor(k));
        if (k.type == KType::recip_sin && near_integer(w))
            throw PlanError("plan_contour: sine pole on contour in factor " + describe_factor(k));
    }
}

PlanInternals plan_internals(const Integrand& ig, const std::vector<double>& c,
                             const std::vector<double>& halfw_guess) {
    PlanInternals pi;
    pi.strip.assign(ig.L, 1.0);
    pi.rate.assign(ig.L, 0.0);
    pi.omega.assign(ig.L, 0.0);
    for (int l = 0; l < ig.L; ++l) {
        double rate = 0.0, strip = 1.0, omega = std::abs(ig.logx[l]) + kPi;
        for (const RFactor& f : ig.axis_factors[l]) {
            const double a = std::abs(f.slopes[l]);
            rate += (f.numerator ? 1.0 : -1.0) * 0.5 * kPi * a;
            omega += 0.6 * a;
            if (f.numerator)
                strip = std::min(strip, nearest_pole_distance_gamma(f.offset + f.slopes[l] * c[l]) /
                                            std::max(a, 1e-12));
        }
        for (const Kernel& k : ig.kernels) {
            const double dl = std::abs(k.slopes[l]);
            if (dl == 0.0) continue;
            const double w = k.offset + dot_c(k.slopes, c);
            double sum_dt = 0.0;
            for (int j = 0; j < ig.L; ++j) sum_dt += std::abs(k.slopes[j]) * halfw_guess[j];
            switch (k.type) {
                case KType::gamma_fn:
                    if (k.axis == l) rate += (k.numerator ? 1.0 : -1.0) * 0.5 * kPi * dl;
                    omega += dl * std::max(1.0, std::log(2.0 + sum_dt));
                    if (k.numerator) strip = std::min(strip, nearest_pole_distance_gamma(w) / dl);
                    break;
                case KType::recip_sin:
                    if (k.axis == l) rate += kPi * dl;
                    omega += kPi * dl;
                    strip = std::min(strip, nearest_integer_distance(w) / dl);
                    break;
                case KType::linear:
                    break;
            }
        }
        if (rate < 0.3)
            throw PlanError("plan_contour: contour envelope does not decay on axis " + std::to_string(l));
        pi.rate[l] = rate;
        pi.strip[l] = std::max(strip, 1e-6);
        pi.omega[l] = omega;
    }
    return pi;
}

} // namespace

ContourPlan plan_contour(const FoxHSpec& spec, const std::vector<double>& hint) {
    spec.validate();
    const Integrand ig = simplify(spec);
    const int L = ig.L;

    ContourPlan plan;
    plan.abscissas.assign(L, 0.5);

    std::vector<AxisWindow> win(L);
    for (int l = 0; l < L; ++l) {
        win[l] = axis_window(ig.axis_factors[l], l);
        if (!(win[l].lo < win[l].hi))
            throw PlanError("plan_contour: empty pole-separating window on axis " + std::to_string(l));
    }

    if (!hint.empty()) {
        if (static_cast<int>(hint.size()) != L)
            throw std::invalid_argument("plan_contour: hint size mismatch");
        plan.abscissas = hint;
    } else {
        for (int l = 0; l < L; ++l) {
            const AxisWindow& w = win[l];
            if (w.lo < 0.5 && 0.5 < w.hi) {
                plan.abscissas[l] = 0.5;
            } else if (std::isfinite(w.lo) && std::isfinite(w.hi)) {
                plan.abscissas[l] = 0.5 * (w.lo + w.hi);
            } else if (std::isfinite(w.lo)) {
                plan.abscissas[l] = w.lo + 0.5;
            } else {
                plan.abscissas[l] = w.hi - 0.5;
            }
        }

        // Composite-factor convergence strips. A reciprocal-sine kernel whose
        // strip cannot be met with the per-variable windows forces negative
        // abscissas across the s_l = 0 poles; the crossings become residue
        // corrections (one lower-dimensional tube per proper variable subset).
        for (const Kernel& k : ig.kernels) {
            const double w = k.offset + dot_c(k.slopes, plan.abscissas);
            if (w > k.strip_lo && w < k.strip_hi) continue;
            if (k.type != KType::recip_sin)
                throw PlanError("plan_contour: no abscissa satisfies the convergence strip of " +
                                describe_factor(k) + " and no residue strategy applies");

            std::vector<int> participating;
            for (int l = 0; l < L; ++l)
                if (k.slopes[l] != 0.0) participating.push_back(l);
            const double target = 0.5 * (std::max(k.strip_lo, -1.0) + std::min(k.strip_hi, 1.0));
            for (int l : participating) {
                if (k.slopes[l] < 0.0)
                    throw PlanError("plan_contour: unsupported negative coupling slope in " +
                                    describe_factor(k));
                double cl = (target - k.offset) / (static_cast<double>(participating.size()) * k.slopes[l]);
                const double lo2 = win[l].lo_after_cross;
                if (std::isfinite(lo2)) cl = std::max(cl, lo2 + 0.05 * std::abs(lo2));
                cl = std::min(cl, -1e-4);
                plan.abscissas[l] = cl;
            }
            const double w2 = k.offset + dot_c(k.slopes, plan.abscissas);
            if (!(w2 > k.strip_lo && w2 < k.strip_hi))
                throw PlanError("plan_contour: residue-shifted abscissas still violate the strip of " +
                                describe_factor(k));
            plan.note = "composite factor " + describe_factor(k) +
                        " requires Re(slopes.c) in (" + std::to_string(k.strip_lo) + "," +
                        std::to_string(k.strip_hi) +
                        "); abscissas shifted across the s=0 poles, residue corrections enumerate "
                        "all proper nonempty variable subsets";
            if (L >= 2) {
                const int P = static_cast<int>(participating.size());
                for (int mask = 1; mask < (1 << P) - 1; ++mask) {
                    ResidueCorrection rc;
                    for (int l = 0; l < L; ++l)
                        if (k.slopes[l] == 0.0) rc.keep_variables.push_back(l);
                    for (int b = 0; b < P; ++b)
                        if (mask & (1 << b)) rc.keep_variables.push_back(participating[b]);
                    std::sort(rc.keep_variables.begin(), rc.keep_variables.end());
                    rc.pole_location = 0.0;
                    plan.residue_corrections.push_back(std::move(rc));
                }
            }
            break; // at most one such kernel arises
        }

        // Univariate specs: slide the abscissa to the point of least contour
        // magnitude inside the admissible window. Cuts the cancellation factor
        // of small-tail evaluations by orders of magnitude.
        if (L == 1) {
            double lo = win[0].lo, hi = win[0].hi;
            if (plan.abscissas[0] < 0.0 && lo >= plan.abscissas[0]) {
                // abscissa was shifted across the first pole; the admissible
                // window now runs from the next pole up to that crossed pole
                lo = std::isfinite(win[0].lo_after_cross) ? win[0].lo_after_cross : -1.0;
                hi = std::min(hi, 0.0);
            }
            for (const Kernel& k : ig.kernels) {
                const double d = k.slopes[0];
                if (d == 0.0) continue;
                const double b1 = (k.strip_lo - k.offset) / d;
                const double b2 = (k.strip_hi - k.offset) / d;
                if (std::isfinite(std::min(b1, b2))) lo = std::max(lo, std::min(b1, b2));
                if (std::isfinite(std::max(b1, b2))) hi = std::min(hi, std::max(b1, b2));
            }
            if (!(lo < hi)) throw PlanError("plan_contour: empty abscissa window for univariate spec");
            if (!std::isfinite(hi)) hi = lo + 20.0;
            if (!std::isfinite(lo)) lo = hi - 20.0;
            const double margin = std::max(1e-3 * (hi - lo), 1e-9);
            plan.abscissas[0] = golden_minimize(
                [&ig](double c) { return axis_log_magnitude(ig, c); }, lo + margin, hi - margin);
        }
    }

    check_poles_on_contour(ig, plan.abscissas);

    // truncation and node density from the envelope decay, the oscillation
    // frequency (|ln x| per axis) and the distance to the nearest pole
    std::vector<double> guess(L, 12.0);
    PlanInternals pin = plan_internals(ig, plan.abscissas, guess);
    plan.half_widths.assign(L, 0.0);
    const double lam = std::max(30.0, std::log(1.0 / plan.target_tol) + 14.0);
    for (int l = 0; l < L; ++l)
        plan.half_widths[l] = std::clamp(lam / pin.rate[l], 3.0, 80.0);
    pin = plan_internals(ig, plan.abscissas, plan.half_widths);

    int panels = 2;
    const double lam_h = std::log(1.0 / plan.target_tol) + 12.0;
    for (int l = 0; l < L; ++l) {
        const double h_osc = 12.0 / std::max(pin.omega[l], 2.0);
        const double h_pole = 2.4 * pin.strip[l];
        const double h_gl = std::min(h_osc, h_pole);
        int p = static_cast<int>(std::ceil(2.0 * plan.half_widths[l] / h_gl));
        // uniform-lattice requirement for coupled evaluations
        const double h_trap = 2.0 * kPi / (pin.omega[l] + lam_h / pin.strip[l]);
        p = std::max(p, static_cast<int>(std::ceil(2.0 * plan.half_widths[l] / (16.0 * h_trap))));
        panels = std::max(panels, p);
    }
    plan.panels_per_axis = std::clamp(panels, 2, 8192);
    return plan;
}

namespace {

// ----------------------------------------------------------------------
// evaluation
// ----------------------------------------------------------------------

constexpr double kGl16X[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kGl16W[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

struct KahanC {
    cd s{0.0, 0.0}, c{0.0, 0.0};
    void add(cd v) {
        const cd y = v - c;
        const cd t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

struct AxisData {
    std::vector<cd> s;     // contour points
    std::vector<cd> lam;   // complex log of (weight * gamma factors * x^s * folded kernels)
    std::vector<cd> mult;  // product of folded linear kernel values
    std::vector<double> logmag;
    double maxlog = -std::numeric_limits<double>::infinity();
    double tail_abs = 0.0;
    cd sum{0.0, 0.0};
    double abs_sum = 0.0;
    cd sum_s{0.0, 0.0}; // s-weighted sum, for the linear-composite expansion
    double abs_sum_s = 0.0;
};

// node value logs on one axis: sum of log-gammas + s ln x + ln w; linear
// kernels stay multiplicative so zero crossings are exact.
AxisData build_axis(const Integrand& ig, int axis, double c, const std::vector<double>& t,
                    const std::vector<double>& w) {
    AxisData ad;
    const std::size_t n = t.size();
    ad.s.resize(n);
    ad.lam.resize(n);
    ad.mult.assign(n, cd(1.0, 0.0));
    ad.logmag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cd s(c, t[i]);
        cd lam = s * ig.logx[axis] + std::log(w[i]);
        for (const RFactor& f : ig.axis_factors[axis]) {
            const cd g = log_gamma(f.offset + f.slopes[axis] * s);
            lam += f.numerator ? g : -g;
        }
        cd mult(1.0, 0.0);
        for (const Kernel& k : ig.kernels) {
            if (k.axis != axis) continue;
            const cd z = k.offset + k.slopes[axis] * s;
            switch (k.type) {
                case KType::gamma_fn: {
                    const cd g = log_gamma(z);
                    lam += k.numerator ? g : -g;
                    break;
                }
                case KType::recip_sin:
                    lam += std::log(kPi) - log_sin_pi(z);
                    break;
                case KType::linear:
                    mult *= z;
                    break;
            }
        }
        ad.s[i] = s;
        ad.lam[i] = lam;
        ad.mult[i] = mult;
        const double lm = lam.real() + (mult == cd(1.0, 0.0) ? 0.0 : std::log(std::abs(mult)));
        ad.logmag[i] = std::isfinite(lm) ? lm : -1e308;
        ad.maxlog = std::max(ad.maxlog, ad.logmag[i]);
    }
    KahanC sum, sum_s;
    Kahan abs_sum, abs_sum_s;
    for (std::size_t i = 0; i < n; ++i) {
        const cd v = std::exp(ad.lam[i]) * ad.mult[i];
        sum.add(v);
        abs_sum.add(std::abs(v));
        const cd vs = v * ad.s[i];
        sum_s.add(vs);
        abs_sum_s.add(std::abs(vs));
    }
    ad.sum = sum.s;
    ad.abs_sum = abs_sum.s;
    ad.sum_s = sum_s.s;
    ad.abs_sum_s = abs_sum_s.s;
    const double edge = std::exp(ad.logmag.front()) + std::exp(ad.logmag.back());
    ad.tail_abs = 4.0 * edge;
    return ad;
}

AxisData build_axis_gl(const Integrand& ig, int axis, double c, double T, int panels) {
    std::vector<double> t, w;
    t.reserve(16 * panels);
    w.reserve(16 * panels);
    const double h = 2.0 * T / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = -T + (p + 0.5) * h;
        for (int i = 7; i >= 0; --i) {
            t.push_back(mid - 0.5 * h * kGl16X[i]);
            w.push_back(0.5 * h * kGl16W[i]);
        }
        for (int i = 0; i < 8; ++i) {
            t.push_back(mid + 0.5 * h * kGl16X[i]);
            w.push_back(0.5 * h * kGl16W[i]);
        }
    }
    return build_axis(ig, axis, c, t, w);
}

AxisData build_axis_lattice(const Integrand& ig, int axis, double c, double h, int K) {
    std::vector<double> t, w;
    t.reserve(2 * K + 1);
    for (int k = -K; k <= K; ++k) {
        t.push_back(k * h);
        w.push_back(h);
    }
    return build_axis(ig, axis, c, t, w);
}

struct PassResult {
    cd value{0.0, 0.0};
    double absmass = 0.0;
    double tail = 0.0;
};

double kernel_ln_bound(const Kernel& k, const std::vector<double>& c,
                       const std::vector<double>& T) {
    const double w = k.offset + dot_c(k.slopes, c);
    switch (k.type) {
        case KType::gamma_fn:
            if (w > 0.0) return (k.numerator ? 1.0 : -1.0) * std::lgamma(w);
            return std::abs(std::lgamma(w)); // crude; only hit off the paper's specs
        case KType::recip_sin:
            return std::log(kPi) - std::log(std::abs(std::sin(kPi * w)));
        case KType::linear: {
            double b = std::abs(w);
            for (std::size_t l = 0; l < k.slopes.size(); ++l) b += std::abs(k.slopes[l]) * T[l];
            return std::log(b + 1e-300);
        }
    }
    return 0.0;
}

cd kernel_log_value(const Kernel& k, cd z) {
    switch (k.type) {
        case KType::gamma_fn: {
            const cd g = log_gamma(z);
            return k.numerator ? g : -g;
        }
        case KType::recip_sin:
            return std::log(kPi) - log_sin_pi(z);
        case KType::linear:
            throw std::logic_error("kernel_log_value: linear kernel has no log form");
    }
    return {};
}

PassResult pass_separable(const std::vector<AxisData>& axes) {
    PassResult r;
    r.value = cd(1.0, 0.0);
    r.absmass = 1.0;
    double tail_rel = 0.0;
    for (const AxisData& a : axes) {
        r.value *= a.sum;
        r.absmass *= a.abs_sum;
        tail_rel += a.tail_abs / std::max(a.abs_sum, 1e-300);
    }
    r.tail = tail_rel * r.absmass;
    return r;
}

PassResult pass_linear(const std::vector<AxisData>& axes, const Kernel& k) {
    PassResult r;
    cd prod_all(1.0, 0.0);
    double abs_all = 1.0;
    double tail_rel = 0.0;
    for (const AxisData& a : axes) {
        prod_all *= a.sum;
        abs_all *= a.abs_sum;
        tail_rel += a.tail_abs / std::max(a.abs_sum, 1e-300);
    }
    KahanC acc;
    Kahan accabs;
    acc.add(k.offset * prod_all);
    accabs.add(std::abs(k.offset) * abs_all);
    for (std::size_t l = 0; l < axes.size(); ++l) {
        if (k.slopes[l] == 0.0) continue;
        cd term = k.slopes[l] * axes[l].sum_s;
        double absterm = std::abs(k.slopes[l]) * axes[l].abs_sum_s;
        for (std::size_t j = 0; j < axes.size(); ++j) {
            if (j == l) continue;
            term *= axes[j].sum;
            absterm *= axes[j].abs_sum;
        }
        acc.add(term);
        accabs.add(absterm);
    }
    r.value = acc.s;
    r.absmass = accabs.s;
    r.tail = tail_rel * r.absmass;
    return r;
}

// Full tensor-product sum with envelope pruning. Node evaluations follow the
// log-domain rule: per-axis log factors and the coupled kernel's log-gammas
// are summed, then exponentiated once.
PassResult pass_tensor(const std::vector<AxisData>& axes, const std::vector<const Kernel*>& coupled,
                       const std::vector<double>& c, const std::vector<double>& T) {
    const int L = static_cast<int>(axes.size());
    double peak = 0.0;
    for (const AxisData& a : axes) peak += a.maxlog;
    const double cut = peak - 50.0;

    std::vector<double> suffix(L + 1, 0.0);
    for (int l = L - 1; l >= 0; --l) suffix[l] = suffix[l + 1] + axes[l].maxlog;

    double kmaxln = 0.0;
    for (const Kernel* k : coupled) kmaxln += kernel_ln_bound(*k, c, T);

    const int n0 = static_cast<int>(axes[0].lam.size());
    std::vector<cd> partial(n0, cd(0.0, 0.0));
    std::vector<double> partial_abs(n0, 0.0);

    detail::parallel_index_loop(n0, [&](int i0) {
        KahanC acc;
        Kahan accabs;
        std::vector<int> idx(L, 0);
        idx[0] = i0;
        // depth-first over axes 1..L-1
        std::vector<cd> lam_stack(L), mult_stack(L);
        std::vector<double> logmag_stack(L);
        lam_stack[0] = axes[0].lam[i0];
        mult_stack[0] = axes[0].mult[i0];
        logmag_stack[0] = axes[0].logmag[i0];
        if (logmag_stack[0] + suffix[1] < cut) return;

        std::function<void(int)> rec = [&](int depth) {
            if (depth == L) {
                cd lnv = lam_stack[L - 1];
                for (const Kernel* k : coupled) {
                    if (k->type == KType::linear) continue;
                    cd z = k->offset;
                    for (int l = 0; l < L; ++l) z += k->slopes[l] * axes[l].s[idx[l]];
                    lnv += kernel_log_value(*k, z);
                }
                cd v = std::exp(lnv) * mult_stack[L - 1];
                for (const Kernel* k : coupled) {
                    if (k->type != KType::linear) continue;
                    cd z = k->offset;
                    for (int l = 0; l < L; ++l) z += k->slopes[l] * axes[l].s[idx[l]];
                    v *= z;
                }
                acc.add(v);
                accabs.add(std::abs(v));
                return;
            }
            const AxisData& a = axes[depth];
            const int n = static_cast<int>(a.lam.size());
            for (int i = 0; i < n; ++i) {
                const double lm = logmag_stack[depth - 1] + a.logmag[i];
                if (lm + suffix[depth + 1] < cut) continue;
                idx[depth] = i;
                lam_stack[depth] = lam_stack[depth - 1] + a.lam[i];
                mult_stack[depth] = mult_stack[depth - 1] * a.mult[i];
                logmag_stack[depth] = lm;
                rec(depth + 1);
            }
        };
        rec(1);
        partial[i0] = acc.s;
        partial_abs[i0] = accabs.s;
    });

    PassResult r;
    KahanC acc;
    Kahan accabs;
    for (int i = 0; i < n0; ++i) {
        acc.add(partial[i]);
        accabs.add(partial_abs[i]);
    }
    r.value = acc.s;
    r.absmass = accabs.s;

    double nodes_total = 1.0;
    double tail_rel = 0.0;
    for (const AxisData& a : axes) {
        nodes_total *= static_cast<double>(a.lam.size());
        tail_rel += a.tail_abs / std::max(std::exp(a.maxlog), 1e-300);
    }
    r.tail = std::exp(kmaxln) * (nodes_total * std::exp(cut) + tail_rel * std::exp(peak));
    return r;
}

// One coupled kernel, all nodes on a shared lattice in u = slopes.s: the
// tensor sum regroups exactly along m = sum k_l as a discrete convolution.
PassResult pass_lattice_conv(const std::vector<AxisData>& axes, const Kernel& k,
                             const std::vector<double>& c, const std::vector<double>& T,
                             double h_u) {
    const int L = static_cast<int>(axes.size());
    std::vector<int> part, rest;
    for (int l = 0; l < L; ++l)
        (k.slopes[l] != 0.0 ? part : rest).push_back(l);

    // axis value arrays (participating axes)
    std::vector<cd> conv;
    std::vector<double> conv_abs;
    bool first = true;
    for (int l : part) {
        const AxisData& a = axes[l];
        const std::size_t n = a.lam.size();
        std::vector<cd> g(n);
        std::vector<double> ga(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = std::exp(a.lam[i]) * a.mult[i];
            ga[i] = std::abs(g[i]);
        }
        if (first) {
            conv = std::move(g);
            conv_abs = std::move(ga);
            first = false;
        } else {
            std::vector<cd> nc(conv.size() + n - 1, cd(0.0, 0.0));
            std::vector<double> na(conv.size() + n - 1, 0.0);
            for (std::size_t i = 0; i < conv.size(); ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    nc[i + j] += conv[i] * g[j];
                    na[i + j] += conv_abs[i] * ga[j];
                }
            conv = std::move(nc);
            conv_abs = std::move(na);
        }
    }

    const double w_c = k.offset + dot_c(k.slopes, c);
    const long mid = (static_cast<long>(conv.size()) - 1) / 2;
    KahanC acc;
    Kahan accabs;
    for (std::size_t i = 0; i < conv.size(); ++i) {
        const double tau = h_u * (static_cast<double>(static_cast<long>(i)) - mid);
        const cd z(w_c, tau);
        if (k.type == KType::linear) {
            acc.add(conv[i] * z);
            accabs.add(conv_abs[i] * std::abs(z));
        } else {
            const cd kv = std::exp(kernel_log_value(k, z));
            acc.add(conv[i] * kv);
            accabs.add(conv_abs[i] * std::abs(kv));
        }
    }

    PassResult r;
    r.value = acc.s;
    r.absmass = accabs.s;
    for (int l : rest) {
        r.value *= axes[l].sum;
        r.absmass *= axes[l].abs_sum;
    }
    double tail_rel = 0.0;
    for (const AxisData& a : axes) tail_rel += a.tail_abs / std::max(a.abs_sum, 1e-300);
    r.tail = tail_rel * r.absmass;
    return r;
}

struct TubeSetup {
    const Integrand* ig;
    std::vector<double> c;
    std::vector<double> T;
    bool force_tensor = false;
};

PassResult run_pass(const TubeSetup& ts, int panels) {
    const Integrand& ig = *ts.ig;
    const int L = ig.L;

    std::vector<const Kernel*> coupled;
    for (const Kernel& k : ig.kernels)
        if (k.axis < 0) coupled.push_back(&k);

    const bool lattice = !ts.force_tensor && coupled.size() == 1 && coupled[0]->type != KType::linear;

    std::vector<AxisData> axes;
    axes.reserve(L);
    double h_u = 0.0;
    if (lattice) {
        // shared lattice step in u = slopes.s across participating axes
        const Kernel& k = *coupled[0];
        h_u = std::numeric_limits<double>::infinity();
        for (int l = 0; l < L; ++l) {
            if (k.slopes[l] == 0.0) continue;
            const double h_t = 2.0 * ts.T[l] / (16.0 * panels);
            h_u = std::min(h_u, std::abs(k.slopes[l]) * h_t);
        }
        for (int l = 0; l < L; ++l) {
            if (k.slopes[l] != 0.0) {
                const double h_t = h_u / std::abs(k.slopes[l]);
                const int K = static_cast<int>(std::ceil(ts.T[l] / h_t));
                axes.push_back(build_axis_lattice(ig, l, ts.c[l], h_t, K));
            } else {
                axes.push_back(build_axis_gl(ig, l, ts.c[l], ts.T[l], panels));
            }
        }
        return pass_lattice_conv(axes, k, ts.c, ts.T, h_u);
    }

    for (int l = 0; l < L; ++l) axes.push_back(build_axis_gl(ig, l, ts.c[l], ts.T[l], panels));

    if (coupled.empty() && !ts.force_tensor) return pass_separable(axes);
    if (coupled.size() == 1 && coupled[0]->type == KType::linear && !ts.force_tensor)
        return pass_linear(axes, *coupled[0]);
    return pass_tensor(axes, coupled, ts.c, ts.T);
}

EvalResult eval_tube(const TubeSetup& ts, int panels0, double tol, int max_refinements) {
    int panels = std::max(panels0, 2);
    PassResult coarse = run_pass(ts, std::max(panels / 2, 1));
    PassResult fine = run_pass(ts, panels);

    EvalResult out;
    for (int iter = 0;; ++iter) {
        const double floor_err = 5e-15 * fine.absmass;
        const double est = std::abs(fine.value - coarse.value) + fine.tail + floor_err;
        const double goal = std::max(tol * std::abs(fine.value), 4.0 * floor_err);
        if (est <= goal || iter >= max_refinements) {
            out.value = fine.value.real();
            out.error_estimate = est;
            out.imag_over_real =
                std::abs(fine.value.imag()) / std::max(std::abs(fine.value.real()), 1e-300);
            if (est > goal && std::abs(fine.value - coarse.value) + fine.tail > 10.0 * floor_err &&
                est > 1e-4 * std::abs(fine.value))
                throw AccuracyError("eval_foxh: refinement budget exhausted", out.value, est);
            return out;
        }
        coarse = fine;
        panels *= 2;
        fine = run_pass(ts, panels);
    }
}

TubeSetup make_setup(const Integrand& ig, const ContourPlan& plan, bool force_tensor) {
    TubeSetup ts;
    ts.ig = &ig;
    ts.c = plan.abscissas;
    ts.T = plan.half_widths;
    ts.force_tensor = force_tensor;
    return ts;
}

} // namespace

EvalResult eval_foxh(const FoxHSpec& spec, const ContourPlan& plan, const EvalOptions& opts) {
    spec.validate();
    if (static_cast<int>(plan.abscissas.size()) != spec.num_vars ||
        static_cast<int>(plan.half_widths.size()) != spec.num_vars)
        throw std::invalid_argument("eval_foxh: plan does not match spec dimension");

    const Integrand ig = simplify(spec);
    check_poles_on_contour(ig, plan.abscissas);

    TubeSetup ts = make_setup(ig, plan, opts.force_tensor);
    EvalResult total = eval_tube(ts, plan.panels_per_axis, plan.target_tol, plan.max_refinements);
    const double scale = std::pow(2.0 * kPi, -spec.num_vars);
    total.value *= scale;
    total.error_estimate *= scale;

    // residue corrections: one tube per recorded variable subset, each an
    // |A|-fold integral carrying its own (2 pi)^-|A| normalization
    for (const ResidueCorrection& rc : plan.residue_corrections) {
        FoxHSpec sub = restrict_spec(spec, rc.keep_variables);
        ContourPlan subplan = plan_contour(sub);
        subplan.target_tol = plan.target_tol;
        const Integrand sig = simplify(sub);
        check_poles_on_contour(sig, subplan.abscissas);
        TubeSetup sts = make_setup(sig, subplan, opts.force_tensor);
        EvalResult part = eval_tube(sts, subplan.panels_per_axis, subplan.target_tol,
                                    subplan.max_refinements);
        const double sub_scale = std::pow(2.0 * kPi, -sub.num_vars);
        total.value += part.value * sub_scale;
        total.error_estimate += part.error_estimate * sub_scale;
        total.imag_over_real = std::max(total.imag_over_real, part.imag_over_real);
    }
    return total;
}

EvalResult eval_meijer_g(const FoxHSpec& spec, double z) {
    if (spec.num_vars != 1)
        throw std::invalid_argument("eval_meijer_g: univariate specs only");
    for (const GammaFactor& f : spec.factors)
        if (std::abs(std::abs(f.slopes[0]) - 1.0) > 0.0)
            throw std::invalid_argument("eval_meijer_g: all slopes must be unit (Meijer G condition)");
    if (!(z > 0.0)) throw std::domain_error("eval_meijer_g: argument must be positive");
    FoxHSpec s = spec;
    s.log_arguments = {std::log(z)};
    const ContourPlan plan = plan_contour(s);
    return eval_foxh(s, plan);
}

double verify_reflection_identity(const ContourPlan& plan) {
    double worst = 0.0;
    for (std::size_t l = 0; l < plan.abscissas.size(); ++l) {
        const double c = plan.abscissas[l];
        const double T = plan.half_widths[l];
        for (int i = 0; i <= 64; ++i) {
            const cd s(c, -T + 2.0 * T * i / 64.0);
            if (s.imag() == 0.0 && near_nonpositive_integer(s.real())) continue;
            const cd lhs = log_gamma(s) + log_gamma(1.0 - s);
            const cd rhs = std::log(kPi) - log_sin_pi(s);
            const cd dev = std::exp(lhs - rhs) - 1.0;
            worst = std::max(worst, std::abs(dev));
        }
    }
    return worst;
}

} // namespace llsc::mb
