#pragma once

/**
 * @file properties.hpp
 * @brief Randomized property suites for the integral inequalities, the
 * Lyapunov sandwich and discrete dissipativity.
 *
 * Profiles are natural cubic splines through random knot values on a uniform
 * knot grid, pinned to zero at both ends and sampled on a fine grid. A
 * failing case is shrunk (knots zeroed, then halved) while it still fails.
 */

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace beamdecay {

enum class Suite { poincare, trace, sandwich, dissipativity };

std::string to_string(Suite s);
/// Accepts "poincare", "trace", "sandwich", "dissipativity".
std::optional<Suite> parse_suite(std::string_view name);
std::vector<Suite> all_suites();

struct PropertyConfig {
    std::uint64_t seed = 42;
    int profiles = 1000;        ///< poincare / trace trials
    int samples = 401;          ///< grid points per profile
    int sandwich_trials = 500;
    int dissipativity_trials = 12;
    /// Multiplies beta0 in the sandwich suite (fault injection).
    double beta0_scale = 1.0;
    /// Multiplies beta1 in the sandwich suite (fault injection).
    double beta1_scale = 1.0;
};

/// Samples of the natural cubic spline through `knots` (uniform on [0, L],
/// knots.front() and knots.back() are the end values) at `samples` points.
std::vector<double> natural_spline_samples(const std::vector<double>& knots, int samples);

/// Knot values: min..max interior knots drawn from N(0, 1), zero ends.
std::vector<double> random_knots(std::mt19937_64& rng, int min_interior = 4, int max_interior = 12);

struct Counterexample {
    std::string detail;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> v;  ///< empty unless the suite pairs a velocity
};

struct SuiteResult {
    Suite suite = Suite::poincare;
    int trials = 0;
    int passed = 0;
    std::optional<Counterexample> counterexample;

    bool ok() const { return passed == trials; }
};

SuiteResult run_suite(Suite suite, const PropertyConfig& cfg);

}  // namespace beamdecay
