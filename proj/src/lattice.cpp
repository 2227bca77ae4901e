#include "randlat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "randlat/counting.hpp"
#include "randlat/errors.hpp"

namespace randlat {

struct UnimodularLattice::State {
    Matrix basis;
    std::once_flag once;
    ReducedFrame frame;
};

std::size_t UnimodularLattice::dim() const { return state_->basis.rows(); }

const Matrix& UnimodularLattice::basis() const { return state_->basis; }

const ReducedFrame& UnimodularLattice::frame() const {
    std::call_once(state_->once, [s = state_.get()] {
        LllResult red = lll(s->basis, kDefaultLllDelta);
        GramSchmidt gs = gram_schmidt(red.basis);
        s->frame.gram = multiply(transpose(red.basis), red.basis);
        s->frame.basis = std::move(red.basis);
        s->frame.transform = std::move(red.transform);
        s->frame.q = std::move(gs.q);
        s->frame.r = std::move(gs.r);
    });
    return state_->frame;
}

UnimodularLattice make_lattice(const Matrix& basis) {
    if (!basis.square() || basis.rows() < 2)
        throw NonSquare("lattice basis must be square with d >= 2, got " + std::to_string(basis.rows()) +
                        "x" + std::to_string(basis.cols()));
    for (double x : basis.data())
        if (!std::isfinite(x)) throw NonUnimodular("basis has non-finite entries");
    const double det = determinant(basis);
    if (std::abs(det - 1.0) > kUnimodularTol)
        throw NonUnimodular("basis determinant " + std::to_string(det) + " is not 1");
    auto s = std::make_shared<UnimodularLattice::State>();
    s->basis = basis;
    return UnimodularLattice(std::move(s));
}

UnimodularLattice dual(const UnimodularLattice& l) {
    return make_lattice(transpose(inverse(l.basis())));
}

namespace {

void sub_column(Matrix& m, std::size_t dst, std::size_t src, double q) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) -= q * m(i, src);
}

void swap_columns(Matrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void check_conditioning(const GramSchmidt& gs) {
    const auto [lo, hi] = std::minmax_element(gs.star_norm2.begin(), gs.star_norm2.end());
    if (!(*lo > 0.0) || std::sqrt(*hi / *lo) > 1e12)
        throw NumericalFailure("basis condition number exceeds 1e12");
}

}  // namespace

LllResult lll(const Matrix& basis, double delta) {
    const std::size_t n = basis.cols();
    Matrix b = basis;
    Matrix u = Matrix::identity(n);
    GramSchmidt gs = gram_schmidt(b);
    check_conditioning(gs);

    std::size_t k = 1;
    std::size_t iterations = 0;
    while (k < n) {
        if (++iterations > 100000) throw NumericalFailure("LLL failed to converge");
        bool changed = false;
        for (std::size_t jj = k; jj-- > 0;) {
            const double q = std::round(gs.mu(k, jj));
            if (q == 0.0) continue;
            sub_column(b, k, jj, q);
            sub_column(u, k, jj, q);
            for (std::size_t l = 0; l < jj; ++l) gs.mu(k, l) -= q * gs.mu(jj, l);
            gs.mu(k, jj) -= q;
            changed = true;
        }
        // Refresh to drop drift from the incremental mu updates.
        if (changed) gs = gram_schmidt(b);
        const double m = gs.mu(k, k - 1);
        if (gs.star_norm2[k] >= (delta - m * m) * gs.star_norm2[k - 1]) {
            ++k;
        } else {
            swap_columns(b, k, k - 1);
            swap_columns(u, k, k - 1);
            gs = gram_schmidt(b);
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    // Swaps can flip orientation. Negating the last column restores det +1
    // and leaves the Lovász and size conditions intact.
    if (determinant(u) < 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            b(i, n - 1) = -b(i, n - 1);
            u(i, n - 1) = -u(i, n - 1);
        }
    }
    return {std::move(b), std::move(u)};
}

Matrix lll_reduce(const UnimodularLattice& l, double delta) {
    if (!(delta > 0.25 && delta < 1.0)) throw DomainError("LLL delta must lie in (0.25, 1)");
    if (delta == kDefaultLllDelta) return l.reduced_basis();
    return lll(l.basis(), delta).basis;
}

bool lattice_eq(const UnimodularLattice& a, const UnimodularLattice& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("lattice_eq on different dimensions");
    const Matrix t = multiply(inverse(a.basis()), b.basis());
    Matrix rounded = t;
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) {
            rounded(i, j) = std::round(t(i, j));
            if (std::abs(t(i, j) - rounded(i, j)) > kIntegralityTol) return false;
        }
    return std::abs(std::abs(determinant(rounded)) - 1.0) < 0.5;
}

AffineUnimodularLattice make_affine(const UnimodularLattice& l, std::span<const double> x) {
    if (x.size() != l.dim()) throw DimensionMismatch("offset dimension does not match lattice");
    for (double xi : x)
        if (!std::isfinite(xi)) throw DomainError("offset must be finite");
    Vector coords = multiply(inverse(l.basis()), x);
    for (double& c : coords) {
        c -= std::floor(c);
        if (c >= 1.0) c = 0.0;
    }
    return AffineUnimodularLattice(l, multiply(l.basis(), coords));
}

Vector canonical_sign(Vector v) {
    for (double x : v) {
        if (std::abs(x) <= 1e-12) continue;
        if (x < 0.0)
            for (double& y : v) y = -y;
        break;
    }
    return v;
}

Vector shortest_vector(const UnimodularLattice& l) {
    const Matrix& red = l.reduced_basis();
    double radius = norm(red.column(0));
    for (std::size_t j = 1; j < red.cols(); ++j) radius = std::min(radius, norm(red.column(j)));

    const Vector origin(l.dim(), 0.0);
    Vector best;
    double best2 = 0.0;
    for_each_in_ball(l, origin, radius, [&](std::span<const double> v) {
        const double n2 = norm2(v);
        if (n2 <= 1e-24) return true;
        Vector cand = canonical_sign(Vector(v.begin(), v.end()));
        const double tol = 1e-9 * std::max(1.0, n2);
        if (best.empty() || n2 < best2 - tol) {
            best = std::move(cand);
            best2 = n2;
        } else if (n2 <= best2 + tol && cand < best) {
            best = std::move(cand);
            best2 = std::min(best2, n2);
        }
        return true;
    });
    if (best.empty()) throw NumericalFailure("shortest vector enumeration found no nonzero vector");
    return best;
}

}  // namespace randlat
