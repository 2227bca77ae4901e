#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "randlat/counting.hpp"
#include "randlat/errors.hpp"
#include "randlat/sampling.hpp"

using namespace randlat;

namespace {

const UnimodularLattice& z2() {
    static const UnimodularLattice l = make_lattice(Matrix::identity(2));
    return l;
}

Region random_region(int d, Rng& rng) {
    Vector c(d);
    for (int i = 0; i < d; ++i) c[i] = rng.uniform(-1.5, 1.5);
    switch (rng.uniform_int(0, 2)) {
        case 0:
            return Region::ball(c, rng.uniform(0.3, 2.5));
        case 1: {
            Vector hi = c;
            for (int i = 0; i < d; ++i) hi[i] += rng.uniform(0.2, 3.0);
            return Region::box(c, hi);
        }
        default: {
            const double r_out = rng.uniform(0.5, 2.5);
            return Region::annulus(c, r_out * rng.uniform(0.1, 0.9), r_out);
        }
    }
}

std::int64_t grid_oracle(const Matrix& b, const Vector& offset, const Region& r, int k_max) {
    return oracle::grid_count(b, offset, k_max, [&](const Vector& p) { return contains(r, p); });
}

}  // namespace

TEST_CASE("enumerate_in_ball examples") {
    CHECK(enumerate_in_ball(z2(), Vector{0.0, 0.0}, 1.5).size() == 9);
    CHECK(grid_oracle(Matrix::identity(2), {}, Region::ball(Vector(2, 0.0), 1.5), 3) == 9);

    auto pts = enumerate_in_ball(z2(), Vector{0.5, 0.5}, 0.8);
    std::sort(pts.begin(), pts.end());
    REQUIRE(pts.size() == 4);
    CHECK(pts[0] == Vector{0.0, 0.0});
    CHECK(pts[1] == Vector{0.0, 1.0});
    CHECK(pts[2] == Vector{1.0, 0.0});
    CHECK(pts[3] == Vector{1.0, 1.0});

    Rng rng({1, 0});
    const UnimodularLattice l = make_lattice(oracle::random_unimodular(3, rng));
    const Vector p = multiply(l.basis(), Vector{2.0, -1.0, 3.0});
    const auto single = enumerate_in_ball(l, p, 0.0);
    REQUIRE(single.size() == 1);
    CHECK(max_abs_diff(Matrix::from_rows({single[0]}), Matrix::from_rows({p})) <= 1e-9);

    CHECK_THROWS_AS(enumerate_in_ball(z2(), Vector{0.0, 0.0}, -1.0), DomainError);
    CHECK_THROWS_AS(enumerate_in_ball(z2(), Vector{0.0, 0.0}, 1e5), Overflow);
}

TEST_CASE("enumeration visits every point exactly once") {
    Rng rng({2, 0});
    for (int t = 0; t < 30; ++t) {
        const int d = 2 + t % 3;
        const UnimodularLattice l = make_lattice(lll(oracle::random_unimodular(d, rng)).basis);
        Vector c(d);
        for (int i = 0; i < d; ++i) c[i] = rng.uniform(-1, 1);
        auto pts = enumerate_in_ball(l, c, 1.7);
        std::sort(pts.begin(), pts.end());
        for (std::size_t i = 1; i < pts.size(); ++i) {
            double gap = 0.0;
            for (int k = 0; k < d; ++k) gap = std::max(gap, std::abs(pts[i][k] - pts[i - 1][k]));
            CHECK(gap > 1e-9);
        }
        // Coefficients of points within R of c are bounded by |dual column| * (|c| + R).
        const Matrix dual_basis = transpose(inverse(l.basis()));
        double reach = 0.0;
        for (int j = 0; j < d; ++j) reach = std::max(reach, norm(dual_basis.column(j)) * (norm(c) + 1.7));
        const std::int64_t expected = oracle::grid_count(
            l.basis(), {}, static_cast<int>(std::ceil(reach)), [&](const Vector& p) { return norm(subtract(p, c)) <= 1.7 + kBoundarySlack; });
        CHECK(static_cast<std::int64_t>(pts.size()) == expected);
    }
}

TEST_CASE("count_region examples") {
    const AffineUnimodularLattice shifted = make_affine(z2(), Vector{0.5, 0.5});
    CHECK(count_region(shifted, Region::ball(Vector(2, 0.0), 1.5)).count == 4);
    CHECK(grid_oracle(Matrix::identity(2), Vector{0.5, 0.5}, Region::ball(Vector(2, 0.0), 1.5), 3) == 4);

    const CountResult ann = count_region(z2(), Region::annulus(Vector(2, 0.0), 1.1, 1.5), {.keep_points = true});
    CHECK(ann.count == 4);
    for (const Vector& p : ann.points) CHECK(std::abs(std::abs(p[0]) - 1.0) + std::abs(std::abs(p[1]) - 1.0) < 1e-12);

    const Region nothing = Region::predicate([](std::span<const double>) { return true; }, Vector{0.5, 0.5}, 0.1, 0.0);
    CHECK(count_region(z2(), nothing).count == 0);

    CHECK(count_region(z2(), Region::ball(Vector(2, 0.0), 1.5), {.exclude_origin = true}).count == 8);
    CHECK(count_region(z2(), Region::ball(Vector(2, 0.0), 1.5), {.stop_at_first = true}).count == 1);
    CHECK(is_empty(z2(), Region::ball(Vector(2, 0.0), 0.5), true));
    CHECK_FALSE(is_empty(z2(), Region::ball(Vector(2, 0.0), 0.5)));
    CHECK(is_empty(shifted, Region::ball(Vector(2, 0.0), 0.7)));
    CHECK_FALSE(is_empty(shifted, Region::ball(Vector(2, 0.0), 0.71)));
    CHECK_THROWS_AS(count_region(z2(), Region::ball(Vector(3, 0.0), 1.0)), DimensionMismatch);
}

TEST_CASE("brute_force_count examples") {
    const UnimodularLattice z3 = make_lattice(Matrix::identity(3));
    const Region b1 = Region::ball(Vector(3, 0.0), 1.0);
    CHECK(brute_force_count(z3, b1, 2).count == 7);
    CHECK(grid_oracle(Matrix::identity(3), {}, b1, 2) == 7);
    CHECK(brute_force_count(z3, b1, required_coeff_bound(z3, b1)).count == 7);
    CHECK_THROWS_AS(brute_force_count(z3, Region::ball(Vector(3, 0.0), 5.0), 2), CoverageError);
    const AffineUnimodularLattice a = make_affine(z3, Vector{0.5, 0.5, 0.5});
    CHECK(brute_force_count(a, Region::ball(Vector(3, 0.0), 1.0), 3).count == 8);
}

TEST_CASE("count_region agrees with brute force on random instances") {
    Rng rng({3, 0});
    for (int t = 0; t < 100; ++t) {
        for (int d : {2, 3}) {
            const UnimodularLattice l = make_lattice(lll(oracle::random_unimodular(d, rng)).basis);
            const Region r = random_region(d, rng);
            const std::int64_t bound = required_coeff_bound(l, r);
            CHECK(count_region(l, r).count == brute_force_count(l, r, bound).count);
            CHECK(count_region(l, r, {.exclude_origin = true}).count ==
                  brute_force_count(l, r, bound, {.exclude_origin = true}).count);

            Vector x(d);
            for (int i = 0; i < d; ++i) x[i] = rng.uniform(-3, 3);
            const AffineUnimodularLattice a = make_affine(l, x);
            const CountResult fast = count_region(a, r, {.keep_points = true});
            CHECK(fast.count == brute_force_count(a, r, required_coeff_bound(l, r, a.offset())).count);
            CHECK(static_cast<std::int64_t>(fast.points.size()) == fast.count);
            for (const Vector& p : fast.points) CHECK(contains(r, p));
        }
    }
}

TEST_CASE("counting invariants") {
    Rng rng({4, 0});
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + t % 2;
        const Matrix b = multiply(oracle::random_unimodular(d, rng), oracle::random_integer_unimodular(d, rng));
        const UnimodularLattice l = make_lattice(b);
        const Region r = random_region(d, rng);

        // Basis invariance.
        CHECK(count_region(l, r).count == count_region(make_lattice(l.reduced_basis()), r).count);

        // Monotonicity for nested balls.
        Vector c(d);
        for (int i = 0; i < d; ++i) c[i] = rng.uniform(-1, 1);
        CHECK(count_region(l, Region::ball(c, 1.0)).count <= count_region(l, Region::ball(c, 1.6)).count);

        // Equivariance under rotations.
        const Matrix rho = sample_rotation(d, rng);
        const UnimodularLattice rotated = make_lattice(multiply(rho, b));
        CHECK(count_region(l, Region::ball(c, 1.8)).count ==
              count_region(rotated, Region::ball(multiply(rho, c), 1.8)).count);

        // Additivity over disjoint unions.
        Vector c2 = c;
        c2[0] += 5.0;
        const Region m1 = Region::ball(c, 1.5);
        const Region m2 = Region::annulus(c2, 0.5, 2.0);
        CHECK(count_region(l, Region::disjoint_union({m1, m2})).count ==
              count_region(l, m1).count + count_region(l, m2).count);
    }
}
