#pragma once

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace llsc {

inline constexpr double kPi = 3.14159265358979323846264338328;
inline constexpr double kEulerGamma = 0.57721566490153286060651209;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// Thrown when a numerical routine cannot reach its accuracy target.
/// Carries the best value obtained so far and the associated error estimate.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_value, double error_estimate)
        : std::runtime_error(what), best_value_(best_value), error_estimate_(error_estimate) {}
    double best_value() const { return best_value_; }
    double error_estimate() const { return error_estimate_; }

private:
    double best_value_;
    double error_estimate_;
};

/// Thrown when no admissible integration contour exists for a spec.
class PlanError : public std::runtime_error {
public:
    explicit PlanError(const std::string& what) : std::runtime_error(what) {}
};

// Thread cap for the internal work-sharing loops. Results do not depend on it.
namespace detail {
inline std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{0};
    return cap;
}
} // namespace detail

inline int max_threads() {
    const int v = detail::thread_cap().load();
    if (v > 0) return v;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

inline void set_max_threads(int n) { detail::thread_cap().store(n); }

} // namespace llsc
