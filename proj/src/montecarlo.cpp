#include "llsc/montecarlo.hpp"

#include <cmath>

#include "parallel.hpp"

namespace llsc::mc {

SimConfig::SimConfig(long long samples_, std::uint64_t seed_, long long batch_)
    : samples(samples_), seed(seed_), batch(batch_) {
    if (samples < 1) throw std::invalid_argument("SimConfig: samples must be positive");
    if (batch < 1) throw std::invalid_argument("SimConfig: batch must be positive");
}

std::mt19937_64 stream_for_batch(std::uint64_t seed, long long batch_index) {
    // splitmix64 of (seed, batch index)
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(batch_index) + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return std::mt19937_64(x);
}

double sample_sc(std::mt19937_64& rng, const ScModel& model) {
    double best = 0.0;
    for (const BranchParams& b : model.branches)
        best = std::max(best, sample_snr(rng, b, model.rho));
    return best;
}

namespace {

struct BatchAccum {
    double sum = 0.0;
    double sumsq = 0.0;
    double maxval = 0.0;
    long long count = 0;
};

template <class Kernel>
MetricResult estimate_mean(const ScModel& model, const SimConfig& cfg, Kernel&& kernel,
                           std::vector<double>* batch_means, bool track_max) {
    if (cfg.samples < 10'000)
        throw std::invalid_argument(
            "SimConfig: estimates carrying standard errors need >= 10^4 samples");
    const long long n_batches = (cfg.samples + cfg.batch - 1) / cfg.batch;
    std::vector<BatchAccum> acc(static_cast<std::size_t>(n_batches));

    detail::parallel_index_loop(static_cast<int>(n_batches), [&](int bi) {
        const long long lo = static_cast<long long>(bi) * cfg.batch;
        const long long hi = std::min(lo + cfg.batch, cfg.samples);
        std::mt19937_64 rng = stream_for_batch(cfg.seed, bi);
        BatchAccum a;
        double cs = 0.0, csq = 0.0; // Kahan compensations
        for (long long i = lo; i < hi; ++i) {
            const double g = sample_sc(rng, model);
            const double k = kernel(g);
            double y = k - cs;
            double t = a.sum + y;
            cs = (t - a.sum) - y;
            a.sum = t;
            y = k * k - csq;
            t = a.sumsq + y;
            csq = (t - a.sumsq) - y;
            a.sumsq = t;
            if (track_max) a.maxval = std::max(a.maxval, g);
        }
        a.count = hi - lo;
        acc[static_cast<std::size_t>(bi)] = a;
    });

    double sum = 0.0, sumsq = 0.0, maxval = 0.0;
    if (batch_means) batch_means->clear();
    for (const BatchAccum& a : acc) {
        sum += a.sum;
        sumsq += a.sumsq;
        maxval = std::max(maxval, a.maxval);
        if (batch_means) batch_means->push_back(a.sum / static_cast<double>(a.count));
    }
    const double n = static_cast<double>(cfg.samples);
    const double mean = sum / n;
    double var = 0.0;
    if (cfg.samples > 1) var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    MetricResult r;
    r.value = mean;
    r.method = Method::monte_carlo;
    r.error_estimate = std::sqrt(var / n);
    r.degenerate = !(var > 0.0);
    if (track_max) r.tail_max = maxval;
    return r;
}

} // namespace

MetricResult estimate_outage(const ScModel& model, double gamma_th, const SimConfig& cfg,
                             std::vector<double>* batch_means) {
    if (!(gamma_th > 0.0)) throw std::domain_error("estimate_outage: gamma_th must be positive");
    MetricResult r = estimate_mean(
        model, cfg, [gamma_th](double g) { return g <= gamma_th ? 1.0 : 0.0; }, batch_means, false);
    const double p = r.value;
    const double n = static_cast<double>(cfg.samples);
    r.error_estimate = std::sqrt(p * (1.0 - p) / n);
    r.degenerate = (p == 0.0 || p == 1.0);
    return r;
}

MetricResult estimate_ber(const ScModel& model, const ModulationParams& mod, const SimConfig& cfg,
                          std::vector<double>* batch_means) {
    return estimate_mean(
        model, cfg,
        [&mod](double g) { return mod.delta * std::erfc(std::sqrt(mod.zeta * g)); }, batch_means,
        false);
}

MetricResult estimate_capacity(const ScModel& model, const SimConfig& cfg,
                               std::vector<double>* batch_means) {
    const double inv_ln2 = 1.0 / std::log(2.0);
    return estimate_mean(
        model, cfg, [inv_ln2](double g) { return std::log1p(g) * inv_ln2; }, batch_means, true);
}

MetricResult estimate_moment(const ScModel& model, double n, const SimConfig& cfg,
                             std::vector<double>* batch_means) {
    return estimate_mean(
        model, cfg, [n](double g) { return std::pow(g, n); }, batch_means, false);
}

} // namespace llsc::mc
