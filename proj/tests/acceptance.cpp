// Acceptance suite: runs every cross-method consistency criterion at its
// stated tolerance and prints one PASS/FAIL line per criterion.
//
// usage: acceptance [--cli <path-to-llsc-binary>]
//
// The CLI path is needed by the byte-identical-output criterion; when it is
// omitted that criterion fails with a diagnostic rather than being skipped.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "llsc/montecarlo.hpp"
#include "llsc/scenario.hpp"

using namespace llsc;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

ScModel scenario1(double rho) {
    return ScModel({BranchParams(1.0, 2.2), BranchParams(0.98, 2.3), BranchParams(1.1, 2.4)}, rho);
}

ScModel scenario2(int L, double rho) {
    return ScModel(std::vector<BranchParams>(L, BranchParams(0.9724, 2.3311)), rho);
}

struct NamedModel {
    const char* name;
    std::function<ScModel(double)> make;
    double s_beta;
};

const std::vector<NamedModel> kScenarios{
    {"scenario1", [](double r) { return scenario1(r); }, 6.9},
    {"scenario2-L2", [](double r) { return scenario2(2, r); }, 4.6622},
    {"scenario2-L4", [](double r) { return scenario2(4, r); }, 9.3244},
};

const std::vector<double> kRhoDb{10.0, 20.0, 30.0};
const ModulationParams kMod(0.5, 0.25);

// least-squares slope of y against x
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion1_cdf_pdf_equivalence() {
    double worst_cdf = 0.0, worst_pdf = 0.0, worst_imag = 0.0;
    for (const NamedModel& sc : kScenarios) {
        for (double db : kRhoDb) {
            const ScModel m = sc.make(db_to_linear(db));
            for (double g : snr_grid(m)) {
                const mb::EvalResult fc = cdf_sc_foxh(g, m);
                const mb::EvalResult fp = pdf_sc_foxh(g, m);
                worst_cdf = std::max(worst_cdf, std::abs(fc.value - cdf_sc_elementary(g, m)));
                const double pe = pdf_sc_elementary(g, m);
                worst_pdf = std::max(worst_pdf, std::abs(fp.value - pe) / pe);
                worst_imag = std::max({worst_imag, fc.imag_over_real, fp.imag_over_real});
            }
        }
    }
    std::ostringstream d;
    d << "max |cdf gap| = " << worst_cdf << " (<= 1e-8), max pdf rel gap = " << worst_pdf
      << " (<= 1e-6), max |Im|/|Re| = " << worst_imag << " (< 1e-8)";
    report(1, "CDF/PDF H-function equivalence",
           worst_cdf <= 1e-8 && worst_pdf <= 1e-6 && worst_imag < 1e-8, d.str());
}

void criterion2_ber_agreement() {
    bool pass = true;
    std::ostringstream d;
    double worst_rel = 0.0, worst_mc = 0.0;
    for (const NamedModel& sc : kScenarios) {
        for (double db : kRhoDb) {
            const ScModel m = sc.make(db_to_linear(db));
            const MetricResult q = ber_quadrature(m, kMod);
            const MetricResult hi = ber_exact_inid(m, kMod);
            worst_rel = std::max(worst_rel, std::abs(hi.value - q.value) / q.value);
            if (m.iid()) {
                const MetricResult hc = ber_exact_iid(m, kMod);
                worst_rel = std::max(worst_rel, std::abs(hc.value - q.value) / q.value);
            }
            const mc::SimConfig cfg(10'000'000, 0xB5Eu + static_cast<unsigned>(db), 1 << 17);
            const MetricResult est = mc::estimate_ber(m, kMod, cfg);
            const double m2 = ber_kernel_second_moment(m, kMod);
            const double sigma_true =
                std::sqrt(std::max(0.0, (m2 - q.value * q.value) / static_cast<double>(cfg.samples)));
            const double sigma = std::max(est.error_estimate, sigma_true);
            const double pulls = std::abs(est.value - q.value) / (sigma > 0 ? sigma : 1e-300);
            worst_mc = std::max(worst_mc, pulls);
        }
    }
    if (worst_rel > 1e-6 || worst_mc > 3.0) pass = false;
    d << "max exact-vs-quadrature rel gap = " << worst_rel << " (<= 1e-6), max MC pull = "
      << worst_mc << " sigma (<= 3)";
    report(2, "BER three-way agreement + Monte Carlo", pass, d.str());
}

void criterion3_capacity_agreement() {
    bool pass = true;
    std::ostringstream d;
    double worst_iid = 0.0, worst_inid = 0.0;
    for (int L : {2, 4}) {
        for (double db : kRhoDb) {
            const ScModel m = scenario2(L, db_to_linear(db));
            const double q = capacity_quadrature(m).value;
            worst_iid = std::max(worst_iid, std::abs(capacity_exact_iid(m).value - q) / q);
        }
    }
    for (double db : kRhoDb) {
        const ScModel m = scenario1(db_to_linear(db));
        const double q = capacity_quadrature(m).value;
        try {
            worst_inid = std::max(worst_inid, std::abs(capacity_exact_inid(m).value - q) / q);
        } catch (const AccuracyError& e) {
            pass = false;
            const mb::ContourPlan plan = mb::plan_contour(capacity_contour_spec(m));
            d << "contour calibration failed at rho_db=" << db << ": " << e.what()
              << " [plan: " << plan.note << "] ";
        }
    }
    if (worst_iid > 1e-5 || worst_inid > 1e-5) pass = false;
    d << "iid rel gap = " << worst_iid << ", inid rel gap = " << worst_inid << " (<= 1e-5)";
    report(3, "ergodic capacity agreement", pass, d.str());
}

void criterion4_diversity_slopes() {
    bool pass = true;
    std::ostringstream d;
    const double gth = db_to_linear(10.0);
    for (const NamedModel& sc : kScenarios) {
        std::vector<double> x, y_out, y_ber;
        for (double db = 40.0; db <= 60.0; db += 5.0) {
            const ScModel m = sc.make(db_to_linear(db));
            x.push_back(db / 10.0);
            y_out.push_back(std::log10(outage(m, gth).value));
            y_ber.push_back(std::log10(ber_quadrature(m, kMod).value));
        }
        const double s_out = fit_slope(x, y_out);
        const double s_ber = fit_slope(x, y_ber);
        if (std::abs(s_out + sc.s_beta) > 0.05 * sc.s_beta) pass = false;
        if (std::abs(s_ber + sc.s_beta) > 0.05 * sc.s_beta) pass = false;
        d << sc.name << ": outage " << s_out << ", ber " << s_ber << " (target " << -sc.s_beta
          << ")  ";
    }
    report(4, "diversity-order slopes over 40..60 dB", pass, d.str());
}

void criterion5_asymptotic_convergence() {
    bool pass = true;
    std::ostringstream d;
    const double gth = db_to_linear(10.0);
    for (const NamedModel& sc : kScenarios) {
        const ScModel m = sc.make(db_to_linear(60.0));
        const double r_out = outage(m, gth).value / outage_asymptotic(m, gth).value;
        const double r_ber = ber_quadrature(m, kMod).value / ber_asymptotic(m, kMod).value;
        if (r_out < 0.98 || r_out > 1.02 || r_ber < 0.98 || r_ber > 1.02) pass = false;
        d << sc.name << ": outage ratio " << r_out << ", ber ratio " << r_ber << "  ";
    }
    const ScModel m2 = scenario2(2, db_to_linear(50.0));
    const double gap =
        std::abs(capacity_quadrature(m2).value - capacity_asymptotic_iid(m2).value);
    if (gap >= 0.05) pass = false;
    d << "capacity asymptote gap @50dB = " << gap << " bits (< 0.05)";
    report(5, "asymptotics converge at high SNR", pass, d.str());
}

void criterion6_moments() {
    bool pass = true;
    std::ostringstream d;
    for (int L : {2, 4}) {
        const ScModel m = scenario2(L, 10.0);
        for (double n : {0.5, 1.0, 2.0}) {
            const double exact = moment_iid(m, n);
            const mc::SimConfig cfg(1'000'000, 0x40E5u + L, 1 << 16);
            const MetricResult est = mc::estimate_moment(m, n, cfg);
            const double pulls = std::abs(est.value - exact) / est.error_estimate;
            if (pulls > 3.0) pass = false;
            d << "L=" << L << " n=" << n << ": " << pulls << " sigma  ";
        }
        bool rejected = false;
        try {
            moment_iid(m, 2.3311);
        } catch (const std::domain_error&) {
            rejected = true;
        }
        try {
            moment_iid(m, 3.0);
            rejected = false;
        } catch (const std::domain_error&) {
        }
        if (!rejected) pass = false;
    }
    d << "n >= beta rejected";
    report(6, "i.i.d. moments vs Monte Carlo, divergence guard", pass, d.str());
}

void criterion7_coverage() {
    const ScModel m = scenario2(2, db_to_linear(10.0));
    const double gth = db_to_linear(10.0);
    const double exact_out = outage(m, gth).value;
    const double exact_ber = ber_quadrature(m, kMod).value;
    const double exact_cap = capacity_quadrature(m).value;
    int in_out = 0, in_ber = 0, in_cap = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        const mc::SimConfig cfg(100'000, 0xC0FFEEu + static_cast<unsigned>(s) * 7919u, 1 << 14);
        const MetricResult o = mc::estimate_outage(m, gth, cfg);
        if (std::abs(o.value - exact_out) <= 3.0 * o.error_estimate) ++in_out;
        const MetricResult b = mc::estimate_ber(m, kMod, cfg);
        if (std::abs(b.value - exact_ber) <= 3.0 * b.error_estimate) ++in_ber;
        const MetricResult c = mc::estimate_capacity(m, cfg);
        if (std::abs(c.value - exact_cap) <= 3.0 * c.error_estimate) ++in_cap;
    }
    std::ostringstream d;
    d << "3-sigma coverage over " << seeds << " seeds: outage " << in_out << ", ber " << in_ber
      << ", capacity " << in_cap << " (each >= 99)";
    report(7, "Monte Carlo interval calibration", in_out >= 99 && in_ber >= 99 && in_cap >= 99,
           d.str());
}

void criterion8_cli_determinism(const std::string& cli_path) {
    if (cli_path.empty()) {
        report(8, "byte-identical CLI output", false, "no --cli path given");
        return;
    }
    const std::string base = " --scenario scenario2-L2 --samples 50000 --seed 1001 --threads 2";
    auto run = [&](const std::string& out) {
        const std::string cmd = cli_path + base + " --out " + out + " >/dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const int rc1 = run("acceptance_run_a.csv");
    const int rc2 = run("acceptance_run_b.csv");
    auto slurp = [](const char* p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    const std::string a = slurp("acceptance_run_a.csv");
    const std::string b = slurp("acceptance_run_b.csv");
    std::ostringstream d;
    d << "exit codes " << rc1 << "/" << rc2 << ", " << a.size() << " bytes, byte-equal = "
      << (a == b && !a.empty() ? "yes" : "no");
    // determinism is the contract here: identical bytes and identical exit
    // status; a 3-sigma Monte Carlo fluctuation (exit 1) would be legitimate
    // as long as both runs agree, but the pinned seed passes cleanly
    report(8, "byte-identical CLI output", rc1 == rc2 && rc1 == 0 && !a.empty() && a == b, d.str());
    std::remove("acceptance_run_a.csv");
    std::remove("acceptance_run_b.csv");
}

void criterion9_figure_shape() {
    bool pass = true;
    std::ostringstream d;
    std::vector<std::vector<cli::SweepRow>> tables;
    for (int L : {1, 2, 4}) {
        cli::ScenarioConfig cfg = cli::builtin_scenario("scenario2-L2");
        cfg.branches.assign(L, BranchParams(0.9724, 2.3311));
        cfg.methods = {Method::exact_h, Method::quadrature, Method::asymptotic};
        tables.push_back(cli::run_sweep(cfg));
    }
    auto column = [](const std::vector<cli::SweepRow>& rows, const std::string& metric) {
        std::vector<double> v;
        for (const cli::SweepRow& r : rows)
            if (r.metric == metric) v.push_back(*r.quadrature);
        return v;
    };
    for (const auto& rows : tables) {
        const auto out = column(rows, "outage");
        const auto ber = column(rows, "ber");
        const auto cap = column(rows, "capacity");
        for (std::size_t i = 1; i < out.size(); ++i) {
            if (!(out[i] < out[i - 1])) pass = false; // outage decreasing in rho
            if (!(ber[i] < ber[i - 1])) pass = false;
            if (!(cap[i] > cap[i - 1])) pass = false; // capacity increasing in rho
        }
    }
    for (const std::string metric : {"outage", "ber"}) {
        const auto l1 = column(tables[0], metric), l2 = column(tables[1], metric),
                   l4 = column(tables[2], metric);
        for (std::size_t i = 0; i < l1.size(); ++i)
            if (!(l4[i] <= l2[i] && l2[i] <= l1[i])) pass = false;
    }
    {
        const auto l1 = column(tables[0], "capacity"), l2 = column(tables[1], "capacity"),
                   l4 = column(tables[2], "capacity");
        for (std::size_t i = 0; i < l1.size(); ++i)
            if (!(l4[i] >= l2[i] && l2[i] >= l1[i])) pass = false;
    }
    // exact-H and quadrature columns stay consistent across the emitted curves
    for (const auto& rows : tables)
        if (!cli::consistency_report(rows).pass) pass = false;
    d << "monotone in rho, ordered in L for all three metrics (L in {1,2,4}); asymptotic "
         "convergence is criterion 4/5";
    report(9, "qualitative sweep reproduction", pass, d.str());
}

} // namespace

int main(int argc, char** argv) {
    std::string cli_path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli_path = argv[i + 1];

    criterion1_cdf_pdf_equivalence();
    criterion2_ber_agreement();
    criterion3_capacity_agreement();
    criterion4_diversity_slopes();
    criterion5_asymptotic_convergence();
    criterion6_moments();
    criterion7_coverage();
    criterion8_cli_determinism(cli_path);
    criterion9_figure_shape();

    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
