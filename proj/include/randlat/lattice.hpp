#pragma once

#include <memory>

#include "randlat/linalg.hpp"

namespace randlat {

inline constexpr double kUnimodularTol = 1e-9;
inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kDefaultLllDelta = 0.999;
inline constexpr std::size_t kMaxDimension = 8;

/// Reduced basis together with its QR factorization; what enumeration needs.
struct ReducedFrame {
    Matrix basis;      ///< LLL-reduced basis (columns)
    Matrix transform;  ///< integral unimodular U with basis = original * U
    Matrix q;          ///< orthogonal factor
    Matrix r;          ///< upper-triangular factor, positive diagonal
    Matrix gram;       ///< basis^T basis
};

/// A point of X_d: a lattice g Z^d with det g = 1. Immutable and cheap to
/// copy; the reduced frame is computed on first use and then shared.
class UnimodularLattice {
public:
    std::size_t dim() const;
    const Matrix& basis() const;
    const Matrix& reduced_basis() const { return frame().basis; }
    const Matrix& gram() const { return frame().gram; }
    const ReducedFrame& frame() const;

private:
    struct State;
    explicit UnimodularLattice(std::shared_ptr<State> s) : state_(std::move(s)) {}
    std::shared_ptr<State> state_;

    friend UnimodularLattice make_lattice(const Matrix& basis);
};

/// A point of Y_d: lattice plus an offset reduced into the fundamental
/// parallelepiped of the lattice basis.
class AffineUnimodularLattice {
public:
    const UnimodularLattice& lattice() const { return lattice_; }
    const Vector& offset() const { return offset_; }
    std::size_t dim() const { return lattice_.dim(); }

private:
    AffineUnimodularLattice(UnimodularLattice l, Vector offset)
        : lattice_(std::move(l)), offset_(std::move(offset)) {}
    UnimodularLattice lattice_;
    Vector offset_;

    friend AffineUnimodularLattice make_affine(const UnimodularLattice& l, std::span<const double> x);
};

/// Throws NonSquare for non-square or d < 2 input and NonUnimodular when
/// |det - 1| > 1e-9. Reduction is deferred.
UnimodularLattice make_lattice(const Matrix& basis);

/// Lattice with basis inverse-transpose of L's basis.
UnimodularLattice dual(const UnimodularLattice& l);

struct LllResult {
    Matrix basis;
    Matrix transform;
};

/// LLL on an arbitrary full-rank basis (columns). Throws NumericalFailure
/// when Gram–Schmidt degenerates or the basis condition exceeds 1e12.
LllResult lll(const Matrix& basis, double delta = kDefaultLllDelta);

/// Requires 0.25 < delta < 1; throws DomainError otherwise.
Matrix lll_reduce(const UnimodularLattice& l, double delta = kDefaultLllDelta);

/// True iff B1^-1 B2 is integral within 1e-6 with determinant +-1.
bool lattice_eq(const UnimodularLattice& a, const UnimodularLattice& b);

/// Reduces x modulo the lattice into {B u : u in [0,1)^d}.
AffineUnimodularLattice make_affine(const UnimodularLattice& l, std::span<const double> x);

/// Nonzero vector of minimal norm. Ties are broken by flipping each
/// candidate so its first nonzero coordinate is positive and taking the
/// lexicographically smallest.
Vector shortest_vector(const UnimodularLattice& l);

/// Flips v so its first coordinate with |x| > 1e-12 is positive.
Vector canonical_sign(Vector v);

}  // namespace randlat
