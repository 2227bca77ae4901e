#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "randlat/constants.hpp"
#include "randlat/regions.hpp"
#include "randlat/sampling.hpp"
#include "randlat/trials.hpp"

namespace randlat {

/// affine: points of Y_d under mu_d, counting every point of g Z^d + x.
/// regular: points of X_d under nu_d, counting NONZERO lattice points.
enum class Setting { affine, regular };

std::string to_string(Setting s);
/// Throws ConfigError.
Setting parse_setting(const std::string& name);

struct EstimateResult {
    double estimate = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;  ///< 95%
    double ci_hi = 0.0;
    std::int64_t n_trials = 0;
    std::uint64_t seed = 0;
};

struct BoundReport {
    EstimateResult empirical;
    double bound = 0.0;
    double slack = 0.0;  ///< bound - empirical.estimate
    /// empirical.estimate - 3 * std_error <= bound.
    bool satisfied = false;
};

BoundReport make_bound_report(const EstimateResult& empirical, double bound);

/// Per-trial lattice point counts: result[r][t] = chi_{regions[r]} of the
/// lattice drawn from stream (seed, t). Independent of the worker count.
std::vector<std::vector<std::int64_t>> collect_counts(const SamplerSpec& spec, Setting setting,
                                                      std::span<const Region> regions, std::int64_t n,
                                                      std::uint64_t seed, const RunOptions& options = {});

/// Number of trials whose lattice misses the region (early-exit counting).
std::int64_t count_holes(const SamplerSpec& spec, Setting setting, const Region& region, std::int64_t n,
                         std::uint64_t seed, const RunOptions& options = {});

// Summaries of already-collected samples.
EstimateResult summarize_mean(std::span<const std::int64_t> counts, std::uint64_t seed);
/// Bessel-corrected variance with a percentile bootstrap CI over the counts.
EstimateResult summarize_variance(std::span<const std::int64_t> counts, std::uint64_t seed,
                                  int bootstrap_replicates = 1000);
EstimateResult summarize_product(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                 std::uint64_t seed);
/// Proportion with binomial standard error and Wilson 95% interval.
EstimateResult summarize_proportion(std::int64_t successes, std::int64_t n, std::uint64_t seed);

/// E[chi_A]; requires n >= 100.
EstimateResult estimate_mean(const SamplerSpec& spec, Setting setting, const Region& r, std::int64_t n,
                             std::uint64_t seed, const RunOptions& options = {});
/// Var[chi_A]; requires n >= 1000 and bootstrap_replicates >= 200.
EstimateResult estimate_variance(const SamplerSpec& spec, Setting setting, const Region& r, std::int64_t n,
                                 std::uint64_t seed, int bootstrap_replicates = 1000,
                                 const RunOptions& options = {});
/// E[chi_A chi_B] over common draws.
EstimateResult estimate_pair_moment(const SamplerSpec& spec, Setting setting, const Region& a, const Region& b,
                                    std::int64_t n, std::uint64_t seed, const RunOptions& options = {});
/// P(chi_A = 0); requires n >= 1000.
EstimateResult estimate_hole_prob(const SamplerSpec& spec, Setting setting, const Region& r, std::int64_t n,
                                  std::uint64_t seed, const RunOptions& options = {});

/// affine: 1 / (1 + volume); regular: C_d / volume (infinity at 0).
double theoretical_bound(double volume, int d, Setting setting);
/// sigma^2 / (sigma^2 + mu^2), the Chebyshev-type hole bound from two moments.
double chebyshev_bound(double mean, double variance);

struct IntersectionVolume {
    double value;
    bool exact;
};

/// |A cap B|: exact for box pairs, identical regions, nested balls and
/// disjoint bounding balls; Monte Carlo with 10^6 points otherwise.
IntersectionVolume intersection_volume(const Region& a, const Region& b);

}  // namespace randlat
