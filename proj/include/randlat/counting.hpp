#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "randlat/errors.hpp"
#include "randlat/lattice.hpp"
#include "randlat/regions.hpp"

namespace randlat {

inline constexpr double kBoundarySlack = 1e-9;
inline constexpr double kMaxEnumeratedPoints = 1e8;

struct CountOptions {
    bool keep_points = false;
    /// Skip the zero vector (regular lattices only): counts Lambda \ {0}.
    bool exclude_origin = false;
    /// Stop at the first point found; count is then 0 or 1.
    bool stop_at_first = false;
};

struct CountResult {
    std::int64_t count = 0;
    std::vector<Vector> points;
};

/// Upper bound on the number of enumeration leaves for a ball of `radius`;
/// throws Overflow when it exceeds 1e8.
void check_enumeration_budget(const ReducedFrame& frame, double radius);

/// Fincke–Pohst enumeration of every v in L with |v - center| <= radius + 1e-9,
/// each exactly once, over the LLL-reduced basis. `visit(span<const double>)`
/// returns false to stop early. Returns false iff stopped early.
template <class Visitor>
bool for_each_in_ball(const UnimodularLattice& l, std::span<const double> center, double radius, Visitor&& visit) {
    if (center.size() != l.dim()) throw DimensionMismatch("enumeration center dimension mismatch");
    if (!(radius >= 0.0)) throw DomainError("enumeration radius must be nonnegative");
    const ReducedFrame& f = l.frame();
    check_enumeration_budget(f, radius);

    const std::size_t d = l.dim();
    const double rr = (radius + kBoundarySlack) * (radius + kBoundarySlack);
    // Target in the R-frame: |B c - t| = |R c - Q^T t|.
    double y[kMaxDimension];
    for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += f.q(k, i) * center[k];
        y[i] = s;
    }
    double coeff[kMaxDimension] = {};
    double partial[kMaxDimension + 1] = {};
    Vector point(d);

    auto descend = [&](auto&& self, std::size_t level) -> bool {
        double shifted = y[level];
        for (std::size_t j = level + 1; j < d; ++j) shifted -= f.r(level, j) * coeff[j];
        const double rll = f.r(level, level);
        const double ctr = shifted / rll;
        const double rem = rr - partial[level + 1];
        if (rem < 0.0) return true;
        const double half = std::sqrt(rem) / rll;
        const double lo = std::ceil(ctr - half);
        const double hi = std::floor(ctr + half);
        for (double c = lo; c <= hi; c += 1.0) {
            const double off = rll * (c - ctr);
            partial[level] = partial[level + 1] + off * off;
            if (partial[level] > rr) continue;
            coeff[level] = c;
            if (level == 0) {
                for (std::size_t i = 0; i < d; ++i) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < d; ++k) s += f.basis(i, k) * coeff[k];
                    point[i] = s;
                }
                if (!visit(std::span<const double>(point))) return false;
            } else if (!self(self, level - 1)) {
                return false;
            }
        }
        return true;
    };
    return descend(descend, d - 1);
}

/// All lattice vectors within radius (+1e-9) of center.
std::vector<Vector> enumerate_in_ball(const UnimodularLattice& l, std::span<const double> center, double radius);

/// chi_A(L) = #(L cap R), exact. Regular lattices count the origin unless
/// options.exclude_origin is set.
CountResult count_region(const UnimodularLattice& l, const Region& r, CountOptions options = {});
CountResult count_region(const AffineUnimodularLattice& l, const Region& r, CountOptions options = {});

/// Early-exit emptiness test.
bool is_empty(const UnimodularLattice& l, const Region& r, bool exclude_origin = false);
bool is_empty(const AffineUnimodularLattice& l, const Region& r);

/// Exhaustive scan over integer coefficients in [-bound, bound]^d of the
/// ORIGINAL basis (no reduction). Throws CoverageError unless
/// bound >= |dual column_i| * (|c - offset| + r) for every i.
CountResult brute_force_count(const UnimodularLattice& l, const Region& r, std::int64_t coeff_bound,
                              CountOptions options = {});
CountResult brute_force_count(const AffineUnimodularLattice& l, const Region& r, std::int64_t coeff_bound,
                              bool keep_points = false);

/// Smallest coefficient bound accepted by brute_force_count.
std::int64_t required_coeff_bound(const UnimodularLattice& l, const Region& r, std::span<const double> offset = {});

}  // namespace randlat
