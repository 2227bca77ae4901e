#pragma once

#include <cstdint>
#include <string>

#include "randlat/lattice.hpp"
#include "randlat/rng.hpp"

namespace randlat {

enum class SamplerMethod { exact2, siegel, hecke };

inline constexpr std::int64_t kDefaultHeckePrime = 10007;
inline constexpr std::int64_t kMinHeckePrime = 101;
inline constexpr int kMaxConsecutiveRejections = 1000000;

struct SamplerSpec {
    SamplerMethod method = SamplerMethod::exact2;
    int d = 2;
    std::int64_t hecke_prime = kDefaultHeckePrime;
    /// Test hook for negative controls: accept every proposal of the exact2
    /// and siegel samplers (samples the whole Siegel set, not Haar).
    bool skip_rejection = false;
};

std::string to_string(SamplerMethod m);
/// Throws ConfigError on an unknown name.
SamplerMethod parse_sampler(const std::string& name);

/// exact2 for d=2, siegel for d=3,4, hecke beyond.
SamplerSpec default_sampler(int d);

/// Throws ConfigError unless: exact2 has d=2; siegel has 2 <= d <= 4;
/// hecke has 2 <= d <= 8 and a prime >= 101.
void validate(const SamplerSpec& spec);

/// Haar rotation in SO(d): QR of a Gaussian matrix with positive R-diagonal,
/// last column negated when det = -1.
Matrix sample_rotation(int d, Rng& rng);

/// Point of the modular fundamental domain {|x| <= 1/2, x^2 + y^2 >= 1}
/// with density proportional to y^-2 dx dy.
struct ModularPoint {
    double x;
    double y;
    int attempts;
};

ModularPoint sample_modular_point(Rng& rng, bool skip_rejection = false);

/// Lattice with basis Rotation(theta) * [[1/sqrt y, x/sqrt y], [0, sqrt y]].
Matrix modular_basis(double x, double y, double theta);

UnimodularLattice sample_x2_exact(Rng& rng, bool skip_rejection = false);

/// True iff the upper-triangular basis (columns) is Korkine–Zolotarev
/// reduced up to size reduction: for every k, the first vector of the
/// projected lattice spanned by columns k.. restricted to rows k.. is a
/// shortest nonzero vector of it (within 1e-9).
bool is_kz_reduced(const Matrix& upper);

/// Accepted upper-triangular factor a*n (columns are the basis vectors in
/// their own Gram–Schmidt frame) and the number of proposals it took.
struct SiegelDraw {
    Matrix upper;
    int attempts;
};

/// Rejection sampler over the Siegel set {a_{k+1}/a_k >= sqrt(3)/2,
/// |n_ij| <= 1/2}: log-ratios s_k are shifted exponentials with rate
/// k(d-k), accepting Korkine–Zolotarev-reduced proposals. Throws
/// RejectionStall after 10^6 consecutive rejections.
SiegelDraw sample_siegel_form(int d, Rng& rng, bool skip_rejection = false);

/// Rotation * sample_siegel_form(d). Requires 2 <= d <= 4.
UnimodularLattice sample_xd_siegel(int d, Rng& rng, bool skip_rejection = false);

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Uniform index-p sublattice of Z^d as a row-style Hermite normal form:
/// identity except row j = (h_0, ..., h_{j-1}, p, 0, ..., 0), with pivot j
/// chosen with probability p^j / sum_i p^i and h uniform in {0..p-1}.
/// Throws NotPrime.
Matrix sample_hecke_hnf(int d, std::int64_t p, Rng& rng);

/// Rotation * p^{-1/d} * HNF. Approximately Haar; bias shrinks as p grows.
UnimodularLattice sample_xd_hecke(int d, std::int64_t p, Rng& rng);

/// Dispatches on spec.method (spec must be valid).
UnimodularLattice sample_lattice(const SamplerSpec& spec, Rng& rng);

/// Lattice from the given sampler plus an offset uniform on the torus.
AffineUnimodularLattice sample_affine(const SamplerSpec& spec, Rng& rng);

/// Offset B k / q with k uniform over {0..q-1}^d subject to
/// gcd(k_1, ..., k_d, q) = 1 (primitive q-torsion). Exploratory measure.
AffineUnimodularLattice sample_torsion_affine(const SamplerSpec& spec, std::int64_t q, Rng& rng);

}  // namespace randlat
