#pragma once

// Lengths of nonzero dual vectors of a unimodular lattice L: the set the
// hole bound for flat tori R^d / L is stated on. Laplace eigenvalues of the
// torus are 4 pi^2 |v|^2 for the same dual vectors v; apply that rescaling
// (to the radial set as well) when working with true eigenvalues.

#include <cstdint>
#include <vector>

#include "randlat/estimators.hpp"

namespace randlat {

inline constexpr double kZeroPuncture = 1e-12;

struct SpectrumSample {
    std::vector<double> lengths;  ///< ascending, with multiplicity
    double cutoff = 0.0;
};

/// Norms in (0, cutoff] of every nonzero vector of dual(L).
SpectrumSample spectrum_up_to(const UnimodularLattice& l, double cutoff);

/// True iff dual(L) has no nonzero vector v with |v| in S. Stops at the
/// first hit; vectors with |v| <= 1e-12 are ignored.
bool spectrum_hole(const UnimodularLattice& l, const RadialSet& s);

/// Empirical nu_d(Omega(L) cap S empty) against C_d / |S|_d. The sampler
/// must draw regular lattices; requires n >= 1000.
BoundReport verify_spectrum_bound(const SamplerSpec& spec, const RadialSet& s, std::int64_t n, std::uint64_t seed,
                                  const RunOptions& options = {});

}  // namespace randlat
