#include "randlat/constants.hpp"

#include <array>
#include <cmath>

#include "randlat/errors.hpp"

namespace randlat {

double zeta(double s) {
    if (!(s > 1.0)) throw DomainError("zeta(s) requires s > 1");
    constexpr int kHead = 20;
    // B_{2k} / (2k)! for k = 1..8.
    constexpr std::array<double, 8> kCoeff = {
        1.0 / 6.0 / 2.0,
        -1.0 / 30.0 / 24.0,
        1.0 / 42.0 / 720.0,
        -1.0 / 30.0 / 40320.0,
        5.0 / 66.0 / 3628800.0,
        -691.0 / 2730.0 / 479001600.0,
        7.0 / 6.0 / 87178291200.0,
        -3617.0 / 510.0 / 20922789888000.0,
    };
    double sum = 0.0;
    for (int n = kHead - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    const double big_n = kHead;
    sum += std::pow(big_n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(big_n, -s);
    // Tail terms: B_{2k}/(2k)! * s (s+1) ... (s+2k-2) * N^{-s-2k+1}.
    double rising = s;
    double power = std::pow(big_n, -s - 1.0);
    for (std::size_t k = 0; k < kCoeff.size(); ++k) {
        sum += kCoeff[k] * rising * power;
        const double a = s + 2.0 * static_cast<double>(k) + 1.0;
        rising *= a * (a + 1.0);
        power /= big_n * big_n;
    }
    return sum;
}

double rogers_constant(int d) {
    if (d < 2) throw DomainError("rogers_constant requires d >= 2");
    if (d == 2) return 16.0 * zeta(2.0);
    return 8.0 * zeta(d - 1.0) / zeta(static_cast<double>(d));
}

}  // namespace randlat
