#include "llsc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace llsc {

namespace {

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526, 0.949107912342758524526189684048,
    0.864864423359769072789712788641, 0.741531185599394439863864773281,
    0.586087235467691130294144838259, 0.405845151377397166906606412077,
    0.207784955007898467600689403773, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008059, 0.063092092629978553290700663189,
    0.104790010322250183839876322542, 0.140653259715525918745189590510,
    0.169004726639267902826583426599, 0.190350578064785409913256402421,
    0.204432940075298892414161999235, 0.209482141084727828012999174892};
constexpr double kWg[4] = {
    0.129484966168869693270611432679, 0.279705391489276667901467771424,
    0.381830050505118944950369775489, 0.417959183673469387755102040816};

struct Panel {
    double a, b;
    double value;
    double error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        k15 += kWgk[i] * (f1 + f2);
        resabs += kWgk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) g7 += kWg[i / 2] * (f1 + f2);
    }
    k15 *= half;
    g7 *= half;
    resabs *= std::abs(half);

    double err = std::abs(k15 - g7);
    // QUADPACK-style sharpening: the Kronrod error decays faster than |K-G|.
    if (resabs > 0.0 && err > 0.0) {
        const double scaled = std::min(1.0, std::pow(200.0 * err / resabs, 1.5));
        err = resabs * scaled;
    }
    return Panel{a, b, k15, err};
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int max_intervals,
                     const std::vector<double>& breakpoints) {
    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::vector<Panel> panels;
    panels.reserve(64);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        panels.push_back(evaluate_panel(f, edges[i], edges[i + 1]));

    auto totals = [&panels]() {
        double v = 0.0, e = 0.0, c = 0.0;
        for (const Panel& p : panels) {
            const double y = p.value - c;
            const double t = v + y;
            c = (t - v) - y;
            v = t;
            e += p.error;
        }
        return std::pair<double, double>(v, e);
    };

    while (true) {
        auto [value, err] = totals();
        const double tol = std::max(abs_tol, rel_tol * std::abs(value));
        if (err <= tol || err <= 1e-300) return {value, err, static_cast<int>(panels.size())};
        if (static_cast<int>(panels.size()) >= max_intervals)
            throw AccuracyError("integrate: interval budget exhausted", value, err);

        // Split the panel with the largest error (first such panel on ties).
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].error > panels[worst].error) worst = i;
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b))
            throw AccuracyError("integrate: interval underflow", value, err);
        panels[worst] = evaluate_panel(f, p.a, mid);
        panels.push_back(evaluate_panel(f, mid, p.b));
    }
}

QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double scale,
                                   double rel_tol, double abs_tol, int max_intervals) {
    if (!(scale > 0.0)) throw std::invalid_argument("integrate_semi_infinite: scale must be positive");
    auto g = [&f, scale](double u) {
        const double om = 1.0 - u;
        if (om <= 0.0) return 0.0;
        const double gamma = scale * u / om;
        if (!std::isfinite(gamma)) return 0.0;
        const double jac = scale / (om * om);
        const double y = f(gamma);
        return std::isfinite(y) ? y * jac : 0.0;
    };
    // Logarithmic seed ladder: integrand mass may sit many decades below the
    // substitution scale (deep-tail averages at high SNR), which a single
    // starting panel over [0,1] cannot detect.
    std::vector<double> seeds;
    for (double u = 1e-13; u < 0.05; u *= 10.0) seeds.push_back(u);
    for (double u : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999}) seeds.push_back(u);
    return integrate(g, 0.0, 1.0, rel_tol, abs_tol, max_intervals, seeds);
}

} // namespace llsc
