#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "llsc/metrics.hpp"

namespace llsc::mc {

struct SimConfig {
    long long samples = 1'000'000;
    std::uint64_t seed = 0;
    long long batch = 1 << 16; // samples per worker chunk
    SimConfig() = default;
    SimConfig(long long samples, std::uint64_t seed, long long batch);
};

/// Deterministic per-batch stream derived from (seed, batch index); estimates
/// are bit-identical regardless of how batches are assigned to workers.
std::mt19937_64 stream_for_batch(std::uint64_t seed, long long batch_index);

/// One draw of the SC output SNR: the max of one quantile draw per branch.
double sample_sc(std::mt19937_64& rng, const ScModel& model);

MetricResult estimate_outage(const ScModel& model, double gamma_th, const SimConfig& cfg,
                             std::vector<double>* batch_means = nullptr);

/// Conditional-kernel BER: the sample mean of delta*erfc(sqrt(zeta*gamma)),
/// exact in gamma so no bit-level decision noise enters the estimate.
MetricResult estimate_ber(const ScModel& model, const ModulationParams& mod, const SimConfig& cfg,
                          std::vector<double>* batch_means = nullptr);

/// Sample mean of log2(1+gamma); tail_max carries the largest SNR sample so
/// heavy-tail undersampling is visible to the caller.
MetricResult estimate_capacity(const ScModel& model, const SimConfig& cfg,
                               std::vector<double>* batch_means = nullptr);

/// Sample mean of gamma^n (raw moment of the SC output SNR).
MetricResult estimate_moment(const ScModel& model, double n, const SimConfig& cfg,
                             std::vector<double>* batch_means = nullptr);

} // namespace llsc::mc
