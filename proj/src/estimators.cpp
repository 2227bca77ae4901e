#include "randlat/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "randlat/counting.hpp"
#include "randlat/errors.hpp"
#include "randlat/statistics.hpp"

namespace randlat {

std::string to_string(Setting s) { return s == Setting::affine ? "affine" : "regular"; }

Setting parse_setting(const std::string& name) {
    if (name == "affine") return Setting::affine;
    if (name == "regular") return Setting::regular;
    throw ConfigError("unknown setting '" + name + "' (expected affine or regular)");
}

BoundReport make_bound_report(const EstimateResult& empirical, double bound) {
    BoundReport r;
    r.empirical = empirical;
    r.bound = bound;
    r.slack = bound - empirical.estimate;
    r.satisfied = std::isinf(bound) || empirical.estimate - 3.0 * empirical.std_error <= bound;
    return r;
}

namespace {

void check_dims(const SamplerSpec& spec, const Region& r) {
    if (r.dim() != static_cast<std::size_t>(spec.d))
        throw DimensionMismatch("region dimension " + std::to_string(r.dim()) + " does not match d=" +
                                std::to_string(spec.d));
}

}  // namespace

std::vector<std::vector<std::int64_t>> collect_counts(const SamplerSpec& spec, Setting setting,
                                                      std::span<const Region> regions, std::int64_t n,
                                                      std::uint64_t seed, const RunOptions& options) {
    validate(spec);
    for (const Region& r : regions) check_dims(spec, r);
    std::vector<std::vector<std::int64_t>> counts(regions.size(), std::vector<std::int64_t>(n, 0));
    run_trials(n, options, [&](std::int64_t t) {
        Rng rng({seed, static_cast<std::uint64_t>(t)});
        if (setting == Setting::affine) {
            const AffineUnimodularLattice lat = sample_affine(spec, rng);
            for (std::size_t i = 0; i < regions.size(); ++i) counts[i][t] = count_region(lat, regions[i]).count;
        } else {
            const UnimodularLattice lat = sample_lattice(spec, rng);
            CountOptions o;
            o.exclude_origin = true;
            for (std::size_t i = 0; i < regions.size(); ++i) counts[i][t] = count_region(lat, regions[i], o).count;
        }
    });
    return counts;
}

std::int64_t count_holes(const SamplerSpec& spec, Setting setting, const Region& region, std::int64_t n,
                         std::uint64_t seed, const RunOptions& options) {
    validate(spec);
    check_dims(spec, region);
    std::vector<std::uint8_t> hole(static_cast<std::size_t>(n), 0);
    run_trials(n, options, [&](std::int64_t t) {
        Rng rng({seed, static_cast<std::uint64_t>(t)});
        if (setting == Setting::affine)
            hole[t] = is_empty(sample_affine(spec, rng), region) ? 1 : 0;
        else
            hole[t] = is_empty(sample_lattice(spec, rng), region, /*exclude_origin=*/true) ? 1 : 0;
    });
    std::int64_t holes = 0;
    for (auto h : hole) holes += h;
    return holes;
}

namespace {

EstimateResult normal_summary(std::span<const double> xs, std::uint64_t seed) {
    EstimateResult r;
    r.n_trials = static_cast<std::int64_t>(xs.size());
    r.seed = seed;
    r.estimate = stats::mean(xs);
    r.std_error = xs.size() > 1 ? std::sqrt(stats::sample_variance(xs) / static_cast<double>(xs.size())) : 0.0;
    r.ci_lo = r.estimate - stats::kZ95 * r.std_error;
    r.ci_hi = r.estimate + stats::kZ95 * r.std_error;
    return r;
}

double histogram_variance(const std::vector<std::pair<std::int64_t, std::int64_t>>& h,
                          std::span<const std::int64_t> freq) {
    double n = 0.0, s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        n += static_cast<double>(freq[i]);
        s += static_cast<double>(freq[i]) * static_cast<double>(h[i].first);
    }
    if (n < 2.0) return 0.0;
    const double m = s / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double dev = static_cast<double>(h[i].first) - m;
        ss += static_cast<double>(freq[i]) * dev * dev;
    }
    return ss / (n - 1.0);
}

}  // namespace

EstimateResult summarize_mean(std::span<const std::int64_t> counts, std::uint64_t seed) {
    std::vector<double> xs(counts.begin(), counts.end());
    return normal_summary(xs, seed);
}

EstimateResult summarize_product(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                 std::uint64_t seed) {
    if (a.size() != b.size()) throw DimensionMismatch("paired samples differ in length");
    std::vector<double> xs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) xs[i] = static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return normal_summary(xs, seed);
}

EstimateResult summarize_variance(std::span<const std::int64_t> counts, std::uint64_t seed,
                                  int bootstrap_replicates) {
    const auto h = stats::histogram(counts);
    std::vector<std::int64_t> freq(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) freq[i] = h[i].second;

    EstimateResult r;
    r.n_trials = static_cast<std::int64_t>(counts.size());
    r.seed = seed;
    r.estimate = histogram_variance(h, freq);

    // Resampling n counts with replacement is a multinomial draw over the
    // distinct values, generated by sequential conditional binomials.
    Rng rng({seed, kAuxiliaryStreamBase + 1});
    const auto n = static_cast<std::int64_t>(counts.size());
    std::vector<double> reps(static_cast<std::size_t>(std::max(bootstrap_replicates, 0)));
    std::vector<std::int64_t> draw(h.size());
    for (double& rep : reps) {
        std::int64_t left = n;
        std::int64_t mass = n;
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (i + 1 == h.size()) {
                draw[i] = left;
            } else {
                draw[i] = rng.binomial(left, static_cast<double>(freq[i]) / static_cast<double>(mass));
                left -= draw[i];
                mass -= freq[i];
            }
        }
        rep = histogram_variance(h, draw);
    }
    if (reps.empty()) {
        r.ci_lo = r.ci_hi = r.estimate;
        return r;
    }
    r.std_error = std::sqrt(stats::sample_variance(reps));
    std::sort(reps.begin(), reps.end());
    r.ci_lo = std::min(stats::quantile_sorted(reps, 0.025), r.estimate);
    r.ci_hi = std::max(stats::quantile_sorted(reps, 0.975), r.estimate);
    return r;
}

EstimateResult summarize_proportion(std::int64_t successes, std::int64_t n, std::uint64_t seed) {
    EstimateResult r;
    r.n_trials = n;
    r.seed = seed;
    const double p = n > 0 ? static_cast<double>(successes) / static_cast<double>(n) : 0.0;
    r.estimate = p;
    r.std_error = n > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
    const auto ci = stats::wilson_interval(successes, n);
    r.ci_lo = std::min(ci.lo, p);
    r.ci_hi = std::max(ci.hi, p);
    return r;
}

EstimateResult estimate_mean(const SamplerSpec& spec, Setting setting, const Region& r, std::int64_t n,
                             std::uint64_t seed, const RunOptions& options) {
    if (n < 100) throw DomainError("estimate_mean requires n >= 100");
    const auto counts = collect_counts(spec, setting, std::span(&r, 1), n, seed, options);
    return summarize_mean(counts[0], seed);
}

EstimateResult estimate_variance(const SamplerSpec& spec, Setting setting, const Region& r, std::int64_t n,
                                 std::uint64_t seed, int bootstrap_replicates, const RunOptions& options) {
    if (n < 1000) throw DomainError("estimate_variance requires n >= 1000");
    if (bootstrap_replicates < 200) throw DomainError("estimate_variance requires >= 200 bootstrap replicates");
    const auto counts = collect_counts(spec, setting, std::span(&r, 1), n, seed, options);
    return summarize_variance(counts[0], seed, bootstrap_replicates);
}

EstimateResult estimate_pair_moment(const SamplerSpec& spec, Setting setting, const Region& a, const Region& b,
                                    std::int64_t n, std::uint64_t seed, const RunOptions& options) {
    if (a.dim() != b.dim()) throw DimensionMismatch("pair regions differ in dimension");
    if (n < 100) throw DomainError("estimate_pair_moment requires n >= 100");
    const std::vector<Region> regions{a, b};
    const auto counts = collect_counts(spec, setting, regions, n, seed, options);
    return summarize_product(counts[0], counts[1], seed);
}

EstimateResult estimate_hole_prob(const SamplerSpec& spec, Setting setting, const Region& r, std::int64_t n,
                                  std::uint64_t seed, const RunOptions& options) {
    if (n < 1000) throw DomainError("estimate_hole_prob requires n >= 1000");
    return summarize_proportion(count_holes(spec, setting, r, n, seed, options), n, seed);
}

double theoretical_bound(double volume, int d, Setting setting) {
    if (!(volume >= 0.0)) throw DomainError("volume must be nonnegative");
    if (setting == Setting::affine) return 1.0 / (1.0 + volume);
    if (volume == 0.0) return std::numeric_limits<double>::infinity();
    return rogers_constant(d) / volume;
}

double chebyshev_bound(double mean, double variance) {
    const double denom = variance + mean * mean;
    return denom > 0.0 ? variance / denom : 1.0;
}

IntersectionVolume intersection_volume(const Region& a, const Region& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("intersection of regions in different dimensions");
    if (&a.node() == &b.node() || region_to_json(a) == region_to_json(b)) return {a.volume(), true};

    const BoundingBall& ba = a.bounding_ball();
    const BoundingBall& bb = b.bounding_ball();
    const double gap = norm(subtract(ba.center, bb.center));
    if (gap > ba.radius + bb.radius) return {0.0, true};

    const Box* xa = std::get_if<Box>(&a.node());
    const Box* xb = std::get_if<Box>(&b.node());
    if (xa && xb) {
        double v = 1.0;
        for (std::size_t i = 0; i < a.dim(); ++i)
            v *= std::max(0.0, std::min(xa->hi[i], xb->hi[i]) - std::max(xa->lo[i], xb->lo[i]));
        return {v, true};
    }
    const Ball* ca = std::get_if<Ball>(&a.node());
    const Ball* cb = std::get_if<Ball>(&b.node());
    if (ca && cb) {
        if (gap + ca->radius <= cb->radius) return {a.volume(), true};
        if (gap + cb->radius <= ca->radius) return {b.volume(), true};
    }

    constexpr int kPoints = 1000000;
    Rng rng({0x1a7e5ec7ULL, kAuxiliaryStreamBase + 2});
    Vector p(a.dim());
    std::int64_t hits = 0;
    for (int i = 0; i < kPoints; ++i) {
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = ba.center[k] + rng.uniform(-ba.radius, ba.radius);
        if (contains(a, p) && contains(b, p)) ++hits;
    }
    const double cube = std::pow(2.0 * ba.radius, static_cast<double>(a.dim()));
    return {cube * static_cast<double>(hits) / kPoints, false};
}

}  // namespace randlat
