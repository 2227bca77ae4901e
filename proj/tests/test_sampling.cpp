#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oracles.hpp"
#include "randlat/counting.hpp"
#include "randlat/errors.hpp"
#include "randlat/estimators.hpp"
#include "randlat/sampling.hpp"
#include "randlat/statistics.hpp"

using namespace randlat;

namespace {

constexpr double kSqrt3Over2 = 0.86602540378443864676;

std::vector<double> shortest_norms(const SamplerSpec& spec, std::uint64_t seed, int n) {
    std::vector<double> out(n);
    for (int t = 0; t < n; ++t) {
        Rng rng({seed, static_cast<std::uint64_t>(t)});
        out[t] = norm(shortest_vector(sample_lattice(spec, rng)));
    }
    return out;
}

}  // namespace

TEST_CASE("sampler specs parse and validate") {
    CHECK(parse_sampler("exact2") == SamplerMethod::exact2);
    CHECK(parse_sampler("siegel") == SamplerMethod::siegel);
    CHECK(parse_sampler("hecke") == SamplerMethod::hecke);
    CHECK_THROWS_AS(parse_sampler("gauss"), ConfigError);
    CHECK(default_sampler(2).method == SamplerMethod::exact2);
    CHECK(default_sampler(3).method == SamplerMethod::siegel);
    CHECK(default_sampler(6).method == SamplerMethod::hecke);

    SamplerSpec s;
    s.method = SamplerMethod::exact2;
    s.d = 3;
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.method = SamplerMethod::siegel;
    s.d = 5;
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.method = SamplerMethod::hecke;
    s.hecke_prime = 97;
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.hecke_prime = 1001;  // 7 * 11 * 13
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.hecke_prime = 10007;
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("rng streams are deterministic and distinct") {
    Rng a({42, 7}), b({42, 7}), c({42, 8}), e({43, 7});
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x != c.uniform());
    CHECK(x != e.uniform());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform_open_closed();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("sample_rotation is a Haar rotation") {
    Rng rng({1, 0});
    for (int d : {2, 3, 4, 6}) {
        for (int t = 0; t < 50; ++t) {
            const Matrix q = sample_rotation(d, rng);
            CHECK(max_abs_diff(multiply(transpose(q), q), Matrix::identity(d)) <= 1e-9);
            CHECK(std::abs(determinant(q) - 1.0) <= 1e-9);
        }
    }
    Rng r1({9, 9}), r2({9, 9});
    CHECK(sample_rotation(3, r1) == sample_rotation(3, r2));

    std::vector<double> bins(16, 0.0);
    for (int t = 0; t < 10000; ++t) {
        Rng r({2, static_cast<std::uint64_t>(t)});
        const Matrix q = sample_rotation(2, r);
        double ang = std::atan2(q(1, 0), q(0, 0));
        if (ang < 0) ang += 2 * std::numbers::pi;
        bins[std::min<std::size_t>(15, static_cast<std::size_t>(ang / (2 * std::numbers::pi) * 16))] += 1;
    }
    CHECK(oracle::chi_square_p(bins, std::vector<double>(16, 10000.0 / 16)) > 0.001);
    CHECK_THROWS_AS(sample_rotation(1, rng), DomainError);
}

TEST_CASE("sample_x2_exact: domain, determinant and acceptance rate") {
    // Acceptance probability: integral over |x| <= 1/2 of the proposal mass
    // (sqrt3/2) y^-2 above the arc, by adaptive quadrature.
    const double oracle_rate = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [](double x) { return kSqrt3Over2 / std::max(kSqrt3Over2, std::sqrt(1.0 - x * x)); }, -0.5, 0.5);
    CHECK(oracle_rate == doctest::Approx(std::numbers::pi / (2.0 * std::sqrt(3.0))).epsilon(1e-12));

    std::int64_t attempts = 0;
    const int n = 100000;
    for (int t = 0; t < n; ++t) {
        Rng rng({3, static_cast<std::uint64_t>(t)});
        const ModularPoint p = sample_modular_point(rng);
        attempts += p.attempts;
        CHECK(std::abs(p.x) <= 0.5);
        CHECK(p.x * p.x + p.y * p.y >= 1.0);
    }
    const double rate = static_cast<double>(n) / static_cast<double>(attempts);
    const double se = std::sqrt(oracle_rate * (1 - oracle_rate) / static_cast<double>(attempts));
    CHECK(std::abs(rate - oracle_rate) <= 3 * se);

    for (int t = 0; t < 200; ++t) {
        Rng rng({4, static_cast<std::uint64_t>(t)});
        CHECK(std::abs(determinant(sample_x2_exact(rng).basis()) - 1.0) <= 1e-9);
    }
}

TEST_CASE("siegel sampler: determinant, KZ acceptance and d=2 y-marginal") {
    for (int d : {2, 3, 4}) {
        for (int t = 0; t < 100; ++t) {
            Rng rng({5, static_cast<std::uint64_t>(t)});
            const SiegelDraw f = sample_siegel_form(d, rng);
            CHECK(is_kz_reduced(f.upper));
            Rng rng2({5, static_cast<std::uint64_t>(t)});
            CHECK(std::abs(determinant(sample_xd_siegel(d, rng2).basis()) - 1.0) <= 1e-9);
        }
    }
    // Not reduced: the second column is shorter than the first.
    CHECK_FALSE(is_kz_reduced(Matrix::from_rows({{2.0, 0.2}, {0.0, 0.5}})));
    CHECK(is_kz_reduced(Matrix::identity(3)));

    std::vector<double> ye(10000), ys(10000);
    for (int t = 0; t < 10000; ++t) {
        Rng a({6, static_cast<std::uint64_t>(t)});
        ye[t] = sample_modular_point(a).y;
        Rng b({7, static_cast<std::uint64_t>(t)});
        const SiegelDraw f = sample_siegel_form(2, b);
        ys[t] = f.upper(1, 1) / f.upper(0, 0);
    }
    CHECK(stats::ks_statistic(ye, ys) < 0.03);

    Rng rng({8, 0});
    CHECK_THROWS_AS(sample_xd_siegel(5, rng), DomainError);
}

TEST_CASE("siegel d=3: nonzero points in Ball(0,2) average to its volume") {
    const Region ball = Region::ball(Vector(3, 0.0), 2.0);
    const double vol = 4.0 / 3.0 * std::numbers::pi * 8.0;
    CHECK(ball.volume() == doctest::Approx(33.51).epsilon(1e-3));
    const EstimateResult e = estimate_mean(default_sampler(3), Setting::regular, ball, 10000, 42);
    CHECK(std::abs(e.estimate - vol) <= 4 * e.std_error);
}

TEST_CASE("hecke: index-5 sublattices of Z^2 are uniform") {
    // The p + 1 = 6 index-5 sublattices are the kernels {v : <w, v> = 0 mod 5}
    // for w on the projective line over F_5.
    const std::array<std::array<int, 2>, 6> lines = {{{1, 0}, {1, 1}, {1, 2}, {1, 3}, {1, 4}, {0, 1}}};
    std::vector<double> hits(6, 0.0);
    const int n = 100000;
    for (int t = 0; t < n; ++t) {
        Rng rng({9, static_cast<std::uint64_t>(t)});
        const Matrix h = sample_hecke_hnf(2, 5, rng);
        CHECK(std::abs(determinant(h)) == doctest::Approx(5.0));
        int matched = 0;
        for (std::size_t k = 0; k < lines.size(); ++k) {
            bool in_kernel = true;
            for (std::size_t j = 0; j < 2; ++j) {
                const auto dotp = static_cast<long>(std::llround(lines[k][0] * h(0, j) + lines[k][1] * h(1, j)));
                in_kernel = in_kernel && dotp % 5 == 0;
            }
            if (in_kernel) {
                hits[k] += 1;
                ++matched;
            }
        }
        CHECK(matched == 1);
    }
    CHECK(oracle::chi_square_p(hits, std::vector<double>(6, n / 6.0)) > 0.001);
}

TEST_CASE("hecke: primality, determinant and d=2 cross-validation") {
    Rng rng({10, 0});
    CHECK_THROWS_AS(sample_xd_hecke(2, 6, rng), NotPrime);
    CHECK_THROWS_AS(sample_xd_hecke(2, 1, rng), NotPrime);
    CHECK(is_prime(10007));
    CHECK_FALSE(is_prime(10001));  // 73 * 137
    CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
    for (int d : {2, 3, 5}) {
        for (int t = 0; t < 50; ++t)
            CHECK(std::abs(determinant(sample_xd_hecke(d, 10007, rng).basis()) - 1.0) <= 1e-9);
    }
    SamplerSpec hecke;
    hecke.method = SamplerMethod::hecke;
    const auto a = shortest_norms(default_sampler(2), 11, 10000);
    const auto b = shortest_norms(hecke, 12, 10000);
    CHECK(stats::ks_statistic(a, b) < 0.05);
}

TEST_CASE("d=3: siegel and hecke agree on shortest-vector norms") {
    SamplerSpec hecke;
    hecke.method = SamplerMethod::hecke;
    hecke.d = 3;
    const auto a = shortest_norms(default_sampler(3), 13, 10000);
    const auto b = shortest_norms(hecke, 14, 10000);
    CHECK(stats::ks_statistic(a, b) < 0.05);
}

TEST_CASE("sample_affine: offsets in the parallelepiped, uniform, and mean count") {
    std::vector<double> bins(16, 0.0);
    for (int t = 0; t < 10000; ++t) {
        Rng rng({15, static_cast<std::uint64_t>(t)});
        const AffineUnimodularLattice a = sample_affine(default_sampler(2), rng);
        const Vector u = multiply(inverse(a.lattice().basis()), a.offset());
        for (double ui : u) {
            CHECK(ui >= -1e-12);
            CHECK(ui < 1.0);
        }
        const auto bx = std::min<std::size_t>(3, static_cast<std::size_t>(std::max(0.0, u[0]) * 4));
        const auto by = std::min<std::size_t>(3, static_cast<std::size_t>(std::max(0.0, u[1]) * 4));
        bins[4 * bx + by] += 1;
    }
    CHECK(oracle::chi_square_p(bins, std::vector<double>(16, 10000.0 / 16)) > 0.001);

    const EstimateResult e =
        estimate_mean(default_sampler(2), Setting::affine, Region::ball(Vector(2, 0.0), 2.0), 100000, 42);
    CHECK(std::abs(e.estimate - 4.0 * std::numbers::pi) <= 4 * e.std_error);
}

TEST_CASE("sample_torsion_affine: primitive q-torsion offsets") {
    std::map<std::pair<long, long>, double> freq;
    for (int t = 0; t < 6000; ++t) {
        Rng rng({16, static_cast<std::uint64_t>(t)});
        const std::int64_t q = 2 + t % 3;
        const AffineUnimodularLattice a = sample_torsion_affine(default_sampler(2), q, rng);
        CHECK(norm(a.offset()) > 1e-9);
        const Vector k = multiply(inverse(a.lattice().basis()), a.offset());
        for (double ki : k) {
            const double qk = static_cast<double>(q) * ki;
            CHECK(std::abs(qk - std::round(qk)) <= 1e-9);
        }
        if (q == 2) freq[{std::lround(2 * k[0]) % 2, std::lround(2 * k[1]) % 2}] += 1;
    }
    CHECK(freq.size() == 3);
    CHECK_FALSE(freq.contains({0, 0}));
    std::vector<double> obs;
    for (const auto& [key, c] : freq) obs.push_back(c);
    CHECK(oracle::chi_square_p(obs, std::vector<double>(3, 2000.0 / 3)) > 0.001);
    Rng rng({17, 0});
    CHECK_THROWS_AS(sample_torsion_affine(default_sampler(2), 1, rng), DomainError);
}

TEST_CASE("determinism and worker-count independence") {
    for (int d : {2, 3}) {
        Rng a({20, 5}), b({20, 5});
        CHECK(sample_lattice(default_sampler(d), a).basis() == sample_lattice(default_sampler(d), b).basis());
    }
    const std::vector<Region> regions{Region::ball(Vector(2, 0.0), 2.0)};
    RunOptions one, four;
    one.workers = 1;
    four.workers = 4;
    CHECK(collect_counts(default_sampler(2), Setting::affine, regions, 3000, 21, one) ==
          collect_counts(default_sampler(2), Setting::affine, regions, 3000, 21, four));
}

TEST_CASE("counts are rotation invariant in distribution") {
    Rng rot_rng({22, 0});
    const Matrix rho = sample_rotation(2, rot_rng);
    const Region ball = Region::ball(Vector(2, 0.0), 2.0);
    std::vector<double> plain(10000), rotated(10000);
    for (int t = 0; t < 10000; ++t) {
        Rng a({23, static_cast<std::uint64_t>(t)});
        plain[t] = static_cast<double>(count_region(sample_x2_exact(a), ball).count);
        Rng b({24, static_cast<std::uint64_t>(t)});
        const UnimodularLattice l = sample_x2_exact(b);
        rotated[t] = static_cast<double>(count_region(make_lattice(multiply(rho, l.basis())), ball).count);
    }
    CHECK(stats::ks_statistic(plain, rotated) < 0.03);
}
