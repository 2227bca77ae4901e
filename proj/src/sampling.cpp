#include "randlat/sampling.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "randlat/errors.hpp"

namespace randlat {

namespace {

const double kSqrt3Over2 = std::sqrt(3.0) / 2.0;

// Any nonzero c with |R c|^2 < bound2, R upper triangular with positive
// diagonal, restricted to the trailing block starting at `from`.
bool has_shorter_vector(const Matrix& r, std::size_t from, double bound2) {
    const std::size_t d = r.rows();
    double coeff[kMaxDimension] = {};
    double partial[kMaxDimension + 1] = {};
    auto descend = [&](auto&& self, std::size_t level) -> bool {
        double shifted = 0.0;
        for (std::size_t j = level + 1; j < d; ++j) shifted -= r(level, j) * coeff[j];
        const double rll = r(level, level);
        const double ctr = shifted / rll;
        const double rem = bound2 - partial[level + 1];
        if (rem <= 0.0) return false;
        const double half = std::sqrt(rem) / rll;
        for (double c = std::ceil(ctr - half); c <= std::floor(ctr + half); c += 1.0) {
            const double off = rll * (c - ctr);
            partial[level] = partial[level + 1] + off * off;
            if (partial[level] >= bound2) continue;
            coeff[level] = c;
            if (level == from) {
                bool nonzero = false;
                for (std::size_t j = from; j < d; ++j) nonzero = nonzero || coeff[j] != 0.0;
                if (nonzero) return true;
            } else if (self(self, level - 1)) {
                return true;
            }
        }
        coeff[level] = 0.0;
        return false;
    };
    return descend(descend, d - 1);
}

}  // namespace

std::string to_string(SamplerMethod m) {
    switch (m) {
        case SamplerMethod::exact2: return "exact2";
        case SamplerMethod::siegel: return "siegel";
        case SamplerMethod::hecke: return "hecke";
    }
    return "unknown";
}

SamplerMethod parse_sampler(const std::string& name) {
    if (name == "exact2") return SamplerMethod::exact2;
    if (name == "siegel") return SamplerMethod::siegel;
    if (name == "hecke") return SamplerMethod::hecke;
    throw ConfigError("unknown sampler '" + name + "' (expected exact2, siegel or hecke)");
}

SamplerSpec default_sampler(int d) {
    SamplerSpec s;
    s.d = d;
    s.method = d == 2 ? SamplerMethod::exact2 : d <= 4 ? SamplerMethod::siegel : SamplerMethod::hecke;
    return s;
}

void validate(const SamplerSpec& spec) {
    const std::string name = to_string(spec.method);
    switch (spec.method) {
        case SamplerMethod::exact2:
            if (spec.d != 2) throw ConfigError("exact2 sampler requires d = 2");
            break;
        case SamplerMethod::siegel:
            if (spec.d < 2 || spec.d > 4) throw ConfigError("siegel sampler requires 2 <= d <= 4");
            break;
        case SamplerMethod::hecke:
            if (spec.d < 2 || spec.d > static_cast<int>(kMaxDimension))
                throw ConfigError("hecke sampler requires 2 <= d <= 8");
            if (spec.hecke_prime < kMinHeckePrime || !is_prime(static_cast<std::uint64_t>(spec.hecke_prime)))
                throw ConfigError("hecke sampler requires a prime >= 101");
            break;
    }
}

Matrix sample_rotation(int d, Rng& rng) {
    if (d < 2) throw DomainError("rotation dimension must be >= 2");
    const auto n = static_cast<std::size_t>(d);
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal();
    // Gram–Schmidt QR already has a positive R diagonal.
    Matrix q = gram_schmidt(g).q;
    if (determinant(q) < 0.0)
        for (std::size_t i = 0; i < n; ++i) q(i, n - 1) = -q(i, n - 1);
    return q;
}

ModularPoint sample_modular_point(Rng& rng, bool skip_rejection) {
    // y = (sqrt3/2)/u has P(y > t) = (sqrt3/2)/t on [sqrt3/2, inf), i.e.
    // density (sqrt3/2) y^-2: the hyperbolic area element restricted to the strip.
    for (int attempt = 1; attempt <= kMaxConsecutiveRejections; ++attempt) {
        const double y = kSqrt3Over2 / rng.uniform_open_closed();
        const double x = rng.uniform(-0.5, 0.5);
        if (skip_rejection || x * x + y * y >= 1.0) return {x, y, attempt};
    }
    throw RejectionStall("modular fundamental domain sampler stalled");
}

Matrix modular_basis(double x, double y, double theta) {
    const double sy = std::sqrt(y);
    const double c = std::cos(theta), s = std::sin(theta);
    const double b00 = 1.0 / sy, b01 = x / sy, b11 = sy;
    Matrix b(2, 2);
    b(0, 0) = c * b00;
    b(1, 0) = s * b00;
    b(0, 1) = c * b01 - s * b11;
    b(1, 1) = s * b01 + c * b11;
    return b;
}

UnimodularLattice sample_x2_exact(Rng& rng, bool skip_rejection) {
    const ModularPoint p = sample_modular_point(rng, skip_rejection);
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return make_lattice(modular_basis(p.x, p.y, theta));
}

bool is_kz_reduced(const Matrix& upper) {
    const std::size_t d = upper.rows();
    for (std::size_t k = 0; k + 1 < d; ++k) {
        const double len = upper(k, k) - 1e-9;
        if (len <= 0.0) return false;
        if (has_shorter_vector(upper, k, len * len)) return false;
    }
    return true;
}

SiegelDraw sample_siegel_form(int d, Rng& rng, bool skip_rejection) {
    if (d < 2 || d > static_cast<int>(kMaxDimension)) throw DomainError("siegel sampler dimension out of range");
    const auto n = static_cast<std::size_t>(d);
    const double s_min = std::log(kSqrt3Over2);

    // Haar measure on SL(d,R) = K A N is dk * prod_{i<j} (a_i/a_j) d*a dn.
    // With s_k = log(a_{k+1}/a_k), log(a_i/a_j) = -(s_i + ... + s_{j-1}), and
    // s_k appears in k(d-k) of the pairs i <= k < j, so the A-density is
    // exp(-sum_k k(d-k) s_k) ds. For d = 2: exp(-s) ds with y = e^s is
    // y^-2 dy, the hyperbolic density of sample_modular_point.
    Matrix upper(n, n);
    double log_a[kMaxDimension];
    for (int attempt = 1; attempt <= kMaxConsecutiveRejections; ++attempt) {
        double weighted = 0.0;
        double s[kMaxDimension];
        for (int k = 1; k < d; ++k) {
            s[k - 1] = s_min + rng.exponential(static_cast<double>(k * (d - k)));
            weighted += static_cast<double>(d - k) * s[k - 1];
        }
        log_a[0] = -weighted / d;
        for (std::size_t k = 1; k < n; ++k) log_a[k] = log_a[k - 1] + s[k - 1];

        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::exp(log_a[i]);
            for (std::size_t j = 0; j < n; ++j) {
                if (j < i) upper(i, j) = 0.0;
                else if (j == i) upper(i, j) = a;
                else upper(i, j) = a * rng.uniform(-0.5, 0.5);
            }
        }
        if (skip_rejection || is_kz_reduced(upper)) return {upper, attempt};
    }
    throw RejectionStall("siegel sampler: 10^6 consecutive rejections");
}

UnimodularLattice sample_xd_siegel(int d, Rng& rng, bool skip_rejection) {
    if (d < 2 || d > 4) throw DomainError("siegel sampler requires 2 <= d <= 4");
    SiegelDraw draw = sample_siegel_form(d, rng, skip_rejection);
    return make_lattice(multiply(sample_rotation(d, rng), draw.upper));
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Matrix sample_hecke_hnf(int d, std::int64_t p, Rng& rng) {
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
        throw NotPrime("hecke index " + std::to_string(p) + " is not prime");
    if (d < 2 || d > static_cast<int>(kMaxDimension)) throw DomainError("hecke dimension out of range");
    const auto n = static_cast<std::size_t>(d);
    const double pd = static_cast<double>(p);

    // Pivot j carries p^j sublattices; total (p^d - 1)/(p - 1).
    double total = 0.0;
    for (int j = 0; j < d; ++j) total += std::pow(pd, j);
    double u = rng.uniform() * total;
    std::size_t pivot = n - 1;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = std::pow(pd, static_cast<double>(j));
        if (u < w) {
            pivot = j;
            break;
        }
        u -= w;
    }
    Matrix h = Matrix::identity(n);
    h(pivot, pivot) = pd;
    for (std::size_t i = 0; i < pivot; ++i) h(pivot, i) = static_cast<double>(rng.uniform_int(0, p - 1));
    return h;
}

UnimodularLattice sample_xd_hecke(int d, std::int64_t p, Rng& rng) {
    const Matrix h = sample_hecke_hnf(d, p, rng);
    const Matrix scaled_h = scaled(h, std::pow(static_cast<double>(p), -1.0 / d));
    return make_lattice(multiply(sample_rotation(d, rng), scaled_h));
}

UnimodularLattice sample_lattice(const SamplerSpec& spec, Rng& rng) {
    switch (spec.method) {
        case SamplerMethod::exact2: return sample_x2_exact(rng, spec.skip_rejection);
        case SamplerMethod::siegel: return sample_xd_siegel(spec.d, rng, spec.skip_rejection);
        case SamplerMethod::hecke: return sample_xd_hecke(spec.d, spec.hecke_prime, rng);
    }
    throw ConfigError("unknown sampler method");
}

AffineUnimodularLattice sample_affine(const SamplerSpec& spec, Rng& rng) {
    UnimodularLattice l = sample_lattice(spec, rng);
    Vector u(static_cast<std::size_t>(spec.d));
    for (double& x : u) x = rng.uniform();
    return make_affine(l, multiply(l.basis(), u));
}

AffineUnimodularLattice sample_torsion_affine(const SamplerSpec& spec, std::int64_t q, Rng& rng) {
    if (q < 2) throw DomainError("torsion order must be >= 2");
    UnimodularLattice l = sample_lattice(spec, rng);
    std::vector<std::int64_t> k(static_cast<std::size_t>(spec.d));
    for (int attempt = 0; attempt < kMaxConsecutiveRejections; ++attempt) {
        std::int64_t g = q;
        for (auto& ki : k) {
            ki = rng.uniform_int(0, q - 1);
            g = std::gcd(g, ki);
        }
        if (g != 1) continue;
        Vector u(k.size());
        for (std::size_t i = 0; i < k.size(); ++i) u[i] = static_cast<double>(k[i]) / static_cast<double>(q);
        return make_affine(l, multiply(l.basis(), u));
    }
    throw RejectionStall("torsion sampler stalled");
}

}  // namespace randlat
