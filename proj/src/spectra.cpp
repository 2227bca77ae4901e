#include "randlat/spectra.hpp"

#include <algorithm>
#include <limits>

#include "randlat/counting.hpp"
#include "randlat/errors.hpp"

namespace randlat {

SpectrumSample spectrum_up_to(const UnimodularLattice& l, double cutoff) {
    if (!(cutoff > 0.0)) throw DomainError("spectrum cutoff must be positive");
    const UnimodularLattice d = dual(l);
    SpectrumSample out;
    out.cutoff = cutoff;
    const Vector origin(l.dim(), 0.0);
    for_each_in_ball(d, origin, cutoff, [&](std::span<const double> v) {
        const double r = norm(v);
        if (r > kZeroPuncture && r <= cutoff) out.lengths.push_back(r);
        return true;
    });
    std::sort(out.lengths.begin(), out.lengths.end());
    return out;
}

bool spectrum_hole(const UnimodularLattice& l, const RadialSet& s) {
    if (s.empty()) return true;
    const UnimodularLattice d = dual(l);
    const Vector origin(l.dim(), 0.0);
    bool hit = false;
    for_each_in_ball(d, origin, s.max_radius(), [&](std::span<const double> v) {
        const double r = norm(v);
        if (r > kZeroPuncture && s.contains(r)) {
            hit = true;
            return false;
        }
        return true;
    });
    return !hit;
}

BoundReport verify_spectrum_bound(const SamplerSpec& spec, const RadialSet& s, std::int64_t n, std::uint64_t seed,
                                  const RunOptions& options) {
    if (n < 1000) throw DomainError("verify_spectrum_bound requires n >= 1000");
    validate(spec);
    const double vol = radial_volume(s, spec.d);
    const double bound = vol > 0.0 ? rogers_constant(spec.d) / vol : std::numeric_limits<double>::infinity();

    std::vector<std::uint8_t> hole(static_cast<std::size_t>(n), 0);
    run_trials(n, options, [&](std::int64_t t) {
        Rng rng({seed, static_cast<std::uint64_t>(t)});
        hole[t] = spectrum_hole(sample_lattice(spec, rng), s) ? 1 : 0;
    });
    std::int64_t holes = 0;
    for (auto h : hole) holes += h;
    return make_bound_report(summarize_proportion(holes, n, seed), bound);
}

}  // namespace randlat
