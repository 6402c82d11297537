#include "llsc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace llsc::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 1234567ULL;

ScenarioConfig base_defaults() {
    ScenarioConfig cfg;
    cfg.gamma_th_db = 10.0;
    cfg.modulation = ModulationParams(0.5, 0.25);
    cfg.sweep = {0.0, 50.0, 5.0};
    cfg.sim = mc::SimConfig(1'000'000, kDefaultSeed, 1 << 16);
    return cfg;
}

[[noreturn]] void config_error(const std::string& origin, int line, const std::string& msg) {
    std::ostringstream os;
    os << origin;
    if (line > 0) os << ":" << line;
    os << ": " << msg;
    throw std::invalid_argument(os.str());
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        config_error(origin, line, "field '" + key + "': cannot parse number from '" + v + "'");
    }
}

long long parse_int(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        config_error(origin, line, "field '" + key + "': cannot parse integer from '" + v + "'");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

Method parse_method(const std::string& origin, int line, const std::string& name) {
    if (name == "exact_h") return Method::exact_h;
    if (name == "quadrature") return Method::quadrature;
    if (name == "asymptotic") return Method::asymptotic;
    if (name == "monte_carlo") return Method::monte_carlo;
    config_error(origin, line, "field 'methods': unknown method '" + name + "'");
}

} // namespace

bool is_builtin(const std::string& name) {
    return name == "scenario1" || name == "scenario2-L2" || name == "scenario2-L4";
}

ScenarioConfig builtin_scenario(const std::string& name) {
    ScenarioConfig cfg = base_defaults();
    cfg.name = name;
    if (name == "scenario1") {
        cfg.branches = {BranchParams(1.0, 2.2), BranchParams(0.98, 2.3), BranchParams(1.1, 2.4)};
    } else if (name == "scenario2-L2") {
        cfg.branches.assign(2, BranchParams(0.9724, 2.3311));
    } else if (name == "scenario2-L4") {
        cfg.branches.assign(4, BranchParams(0.9724, 2.3311));
    } else {
        throw std::invalid_argument("builtin_scenario: unknown scenario '" + name + "'");
    }
    return cfg;
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    ScenarioConfig cfg = base_defaults();
    cfg.name = origin;

    std::map<std::string, std::pair<std::string, int>> kv;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) config_error(origin, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) config_error(origin, lineno, "empty key");
        if (kv.count(key)) config_error(origin, lineno, "duplicate key '" + key + "'");
        kv[key] = {value, lineno};
    }

    auto take = [&kv](const std::string& key) -> std::optional<std::pair<std::string, int>> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        auto v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("name")) cfg.name = v->first;

    const auto branches_kv = take("branches");
    const auto branch_kv = take("branch");
    const auto copies_kv = take("iid_copies");
    if (branches_kv && (branch_kv || copies_kv))
        config_error(origin, branches_kv->second,
                     "fields 'branches' and 'branch'/'iid_copies' are mutually exclusive");
    if (!branches_kv && !branch_kv)
        config_error(origin, 0, "field 'branches' (or 'branch' + 'iid_copies') is required");

    try {
        if (branches_kv) {
            for (const std::string& pair : split(branches_kv->first, ',')) {
                const auto colon = pair.find(':');
                if (colon == std::string::npos)
                    config_error(origin, branches_kv->second,
                                 "field 'branches': expected 'alpha:beta' pairs, got '" + pair + "'");
                cfg.branches.emplace_back(
                    parse_double(origin, branches_kv->second, "branches", trim(pair.substr(0, colon))),
                    parse_double(origin, branches_kv->second, "branches", trim(pair.substr(colon + 1))));
            }
        } else {
            std::istringstream bs(branch_kv->first);
            double a = 0.0, b = 0.0;
            if (!(bs >> a >> b))
                config_error(origin, branch_kv->second, "field 'branch': expected 'alpha beta'");
            long long copies = 1;
            if (copies_kv) copies = parse_int(origin, copies_kv->second, "iid_copies", copies_kv->first);
            if (copies < 1) config_error(origin, copies_kv ? copies_kv->second : 0,
                                         "field 'iid_copies': must be >= 1");
            cfg.branches.assign(static_cast<std::size_t>(copies), BranchParams(a, b));
        }
    } catch (const std::invalid_argument& e) {
        // re-raise BranchParams validation with field context
        std::string msg = e.what();
        if (msg.rfind(origin, 0) == 0) throw;
        config_error(origin, 0, std::string("field 'branches': ") + e.what());
    }

    if (auto v = take("gamma_th_db")) cfg.gamma_th_db = parse_double(origin, v->second, "gamma_th_db", v->first);

    double delta = cfg.modulation.delta, zeta = cfg.modulation.zeta;
    if (auto v = take("delta")) delta = parse_double(origin, v->second, "delta", v->first);
    if (auto v = take("zeta")) zeta = parse_double(origin, v->second, "zeta", v->first);
    try {
        cfg.modulation = ModulationParams(delta, zeta);
    } catch (const std::invalid_argument& e) {
        config_error(origin, 0, std::string("field 'delta'/'zeta': ") + e.what());
    }

    const auto vmin = take("rho_min_db");
    const auto vmax = take("rho_max_db");
    const auto vstep = take("step_db");
    if (!vmin) config_error(origin, 0, "field 'rho_min_db' is required");
    if (!vmax) config_error(origin, 0, "field 'rho_max_db' is required");
    if (!vstep) config_error(origin, 0, "field 'step_db' is required");
    cfg.sweep.rho_min_db = parse_double(origin, vmin->second, "rho_min_db", vmin->first);
    cfg.sweep.rho_max_db = parse_double(origin, vmax->second, "rho_max_db", vmax->first);
    cfg.sweep.step_db = parse_double(origin, vstep->second, "step_db", vstep->first);
    if (!(cfg.sweep.rho_min_db < cfg.sweep.rho_max_db))
        config_error(origin, vmin->second, "field 'rho_min_db': must be < rho_max_db");
    if (!(cfg.sweep.step_db > 0.0))
        config_error(origin, vstep->second, "field 'step_db': must be positive");

    long long samples = cfg.sim.samples, batch = cfg.sim.batch;
    std::uint64_t seed = cfg.sim.seed;
    if (auto v = take("samples")) samples = parse_int(origin, v->second, "samples", v->first);
    if (auto v = take("seed"))
        seed = static_cast<std::uint64_t>(parse_int(origin, v->second, "seed", v->first));
    if (auto v = take("batch")) batch = parse_int(origin, v->second, "batch", v->first);
    try {
        cfg.sim = mc::SimConfig(samples, seed, batch);
    } catch (const std::invalid_argument& e) {
        config_error(origin, 0, std::string("field 'samples'/'batch': ") + e.what());
    }

    if (auto v = take("methods")) {
        cfg.methods.clear();
        for (const std::string& m : split(v->first, ','))
            cfg.methods.insert(parse_method(origin, v->second, m));
        if (cfg.methods.empty()) config_error(origin, v->second, "field 'methods': empty");
    }

    if (!kv.empty())
        config_error(origin, kv.begin()->second.second, "unknown field '" + kv.begin()->first + "'");
    return cfg;
}

ScenarioConfig load_config(const std::string& path_or_name) {
    if (is_builtin(path_or_name)) return builtin_scenario(path_or_name);
    std::ifstream in(path_or_name);
    if (!in)
        throw std::invalid_argument("load_config: '" + path_or_name +
                                    "' is neither a built-in scenario nor a readable file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path_or_name);
}

namespace {

std::uint64_t row_seed(std::uint64_t seed, int point_index) {
    return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(point_index + 1);
}

void update_discrepancy(SweepRow& row) {
    std::vector<double> vals;
    for (const auto& v : {row.exact_h, row.quadrature, row.mc_estimate})
        if (v && std::isfinite(*v)) vals.push_back(*v);
    if (vals.size() < 2) return;
    double denom = 0.0;
    if (row.quadrature && std::isfinite(*row.quadrature)) denom = std::abs(*row.quadrature);
    if (denom == 0.0)
        for (double v : vals) denom = std::max(denom, std::abs(v));
    if (denom == 0.0) denom = 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            worst = std::max(worst, std::abs(vals[i] - vals[j]) / denom);
    row.max_discrepancy = worst;
}

} // namespace

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg) {
    std::vector<double> points;
    for (double r = cfg.sweep.rho_min_db; r <= cfg.sweep.rho_max_db + 1e-9; r += cfg.sweep.step_db)
        points.push_back(r);

    const double gamma_th = db_to_linear(cfg.gamma_th_db);
    const bool want_exact = cfg.methods.count(Method::exact_h) > 0;
    const bool want_quad = cfg.methods.count(Method::quadrature) > 0;
    const bool want_asy = cfg.methods.count(Method::asymptotic) > 0;
    const bool want_mc = cfg.methods.count(Method::monte_carlo) > 0;

    std::vector<SweepRow> rows;
    for (int pi = 0; pi < static_cast<int>(points.size()); ++pi) {
        const double rho_db = points[pi];
        const ScModel model(cfg.branches, db_to_linear(rho_db));
        const mc::SimConfig sim(cfg.sim.samples, row_seed(cfg.sim.seed, pi), cfg.sim.batch);
        const double n = static_cast<double>(sim.samples);

        auto cell = [](SweepRow& row, const char* what, auto&& fn) {
            try {
                fn();
            } catch (const std::exception& e) {
                if (!row.note.empty()) row.note += "; ";
                row.note += std::string(what) + ": " + e.what();
            }
        };

        if (cfg.metrics.count("outage")) {
            SweepRow row{rho_db, "outage"};
            if (want_quad) cell(row, "quadrature", [&] {
                    const MetricResult m = outage(model, gamma_th);
                    row.quadrature = m.value;
                    row.quad_err = m.error_estimate;
                    row.mc_sigma_floor = std::sqrt(std::max(0.0, m.value * (1.0 - m.value) / n));
                });
            if (want_exact) cell(row, "exact_h", [&] {
                    const MetricResult m = outage_foxh(model, gamma_th);
                    row.exact_h = m.value;
                    row.exact_err = m.error_estimate;
                });
            if (want_asy) cell(row, "asymptotic", [&] {
                    row.asymptotic = outage_asymptotic(model, gamma_th).value;
                });
            if (want_mc) cell(row, "monte_carlo", [&] {
                    const MetricResult m = mc::estimate_outage(model, gamma_th, sim);
                    row.mc_estimate = m.value;
                    row.mc_stderr = m.error_estimate;
                });
            update_discrepancy(row);
            rows.push_back(std::move(row));
        }

        if (cfg.metrics.count("ber")) {
            SweepRow row{rho_db, "ber"};
            if (want_quad) cell(row, "quadrature", [&] {
                    const MetricResult m = ber_quadrature(model, cfg.modulation);
                    row.quadrature = m.value;
                    row.quad_err = m.error_estimate;
                    const double m2 = ber_kernel_second_moment(model, cfg.modulation);
                    row.mc_sigma_floor = std::sqrt(std::max(0.0, (m2 - m.value * m.value) / n));
                });
            if (want_exact) cell(row, "exact_h", [&] {
                    const MetricResult m = model.iid() ? ber_exact_iid(model, cfg.modulation)
                                                       : ber_exact_inid(model, cfg.modulation);
                    row.exact_h = m.value;
                    row.exact_err = m.error_estimate;
                });
            if (want_asy) cell(row, "asymptotic", [&] {
                    row.asymptotic = ber_asymptotic(model, cfg.modulation).value;
                });
            if (want_mc) cell(row, "monte_carlo", [&] {
                    const MetricResult m = mc::estimate_ber(model, cfg.modulation, sim);
                    row.mc_estimate = m.value;
                    row.mc_stderr = m.error_estimate;
                });
            update_discrepancy(row);
            rows.push_back(std::move(row));
        }

        if (cfg.metrics.count("capacity")) {
            SweepRow row{rho_db, "capacity"};
            if (want_quad) cell(row, "quadrature", [&] {
                    const MetricResult m = capacity_quadrature(model);
                    row.quadrature = m.value;
                    row.quad_err = m.error_estimate;
                    const double m2 = capacity_kernel_second_moment(model);
                    row.mc_sigma_floor = std::sqrt(std::max(0.0, (m2 - m.value * m.value) / n));
                });
            if (want_exact) cell(row, "exact_h", [&] {
                    const MetricResult m =
                        model.iid() ? capacity_exact_iid(model) : capacity_exact_inid(model);
                    row.exact_h = m.value;
                    row.exact_err = m.error_estimate;
                });
            if (want_asy && model.iid()) cell(row, "asymptotic", [&] {
                    row.asymptotic = capacity_asymptotic_iid(model).value;
                });
            if (want_mc) cell(row, "monte_carlo", [&] {
                    const MetricResult m = mc::estimate_capacity(model, sim);
                    row.mc_estimate = m.value;
                    row.mc_stderr = m.error_estimate;
                });
            update_discrepancy(row);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

std::string fmt_cell(const std::optional<double>& v) {
    if (!v) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", *v);
    return buf;
}

} // namespace

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << "rho_db,metric,exact_h,quadrature,asymptotic,mc_estimate,mc_stderr,max_discrepancy\n";
    for (const SweepRow& r : rows) {
        os << fmt_cell(r.rho_db) << ',' << r.metric << ',' << fmt_cell(r.exact_h) << ','
           << fmt_cell(r.quadrature) << ',' << fmt_cell(r.asymptotic) << ','
           << fmt_cell(r.mc_estimate) << ',' << fmt_cell(r.mc_stderr) << ','
           << fmt_cell(r.max_discrepancy) << '\n';
    }
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    emit_csv(rows, out);
    if (!out.good()) throw std::runtime_error("emit_csv: write failure on '" + path + "'");
}

ReportResult consistency_report(const std::vector<SweepRow>& rows, double tolerance) {
    ReportResult rep;
    std::ostringstream os;
    if (rows.empty()) {
        rep.summary = "warning: empty sweep table; consistency passes vacuously\n";
        return rep;
    }
    for (const SweepRow& r : rows) {
        auto flag = [&](const std::string& what) {
            rep.pass = false;
            ++rep.failures;
            os << "FAIL rho_db=" << r.rho_db << " metric=" << r.metric << ": " << what << "\n";
        };
        if (!r.note.empty()) flag("method failure: " + r.note);
        if (r.exact_h && r.quadrature && std::isfinite(*r.exact_h) && std::isfinite(*r.quadrature)) {
            const double gap = std::abs(*r.exact_h - *r.quadrature);
            const double thr =
                std::max(tolerance * std::abs(*r.quadrature), r.exact_err + r.quad_err);
            if (gap > thr) {
                std::ostringstream d;
                d << "exact_h vs quadrature gap " << gap << " exceeds " << thr;
                flag(d.str());
            }
        }
        if (r.mc_estimate && r.quadrature && std::isfinite(*r.mc_estimate) &&
            std::isfinite(*r.quadrature)) {
            const double sigma = std::max(r.mc_stderr.value_or(0.0), r.mc_sigma_floor);
            const double gap = std::abs(*r.mc_estimate - *r.quadrature);
            if (gap > 3.0 * sigma + 1e-300) {
                std::ostringstream d;
                d << "monte_carlo vs quadrature gap " << gap << " exceeds 3*sigma = " << 3.0 * sigma;
                flag(d.str());
            }
        }
    }
    if (rep.pass) os << "consistency report: all " << rows.size() << " rows pass\n";
    rep.summary = os.str();
    return rep;
}

} // namespace llsc::cli
