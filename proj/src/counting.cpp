#include "randlat/counting.hpp"

#include <algorithm>
#include <string>

namespace randlat {

void check_enumeration_budget(const ReducedFrame& f, double radius) {
    const std::size_t d = f.r.rows();
    const double r = radius + kBoundarySlack;
    // Leaves of the search tree: at most prod_i (2 r / R_ii + 1).
    double tree = 1.0;
    for (std::size_t i = 0; i < d; ++i) tree *= 2.0 * r / f.r(i, i) + 1.0;
    // Volume bound: every counted point's fundamental cell sits inside the
    // ball of radius r + diam(cell), and cells have unit volume.
    double diam = 0.0;
    for (std::size_t j = 0; j < d; ++j) diam += norm(f.basis.column(j));
    const double by_volume = unit_ball_volume(static_cast<int>(d)) * std::pow(r + diam, static_cast<double>(d));
    const double predicted = std::min(tree, by_volume);
    if (predicted > kMaxEnumeratedPoints)
        throw Overflow("enumeration would visit up to " + std::to_string(predicted) + " points (limit 1e8)");
}

std::vector<Vector> enumerate_in_ball(const UnimodularLattice& l, std::span<const double> center, double radius) {
    std::vector<Vector> out;
    for_each_in_ball(l, center, radius, [&](std::span<const double> v) {
        out.emplace_back(v.begin(), v.end());
        return true;
    });
    return out;
}

namespace {

bool is_origin(std::span<const double> v) { return norm2(v) <= 1e-24; }

CountResult count_shifted(const UnimodularLattice& l, const Region& r, std::span<const double> offset,
                          CountOptions options) {
    if (r.dim() != l.dim()) throw DimensionMismatch("region dimension does not match lattice");
    CountResult out;
    const BoundingBall& bb = r.bounding_ball();
    const std::size_t d = l.dim();
    Vector target = bb.center;
    if (!offset.empty())
        for (std::size_t i = 0; i < d; ++i) target[i] -= offset[i];
    Vector shifted(d);
    for_each_in_ball(l, target, bb.radius, [&](std::span<const double> v) {
        if (options.exclude_origin && is_origin(v)) return true;
        std::span<const double> p = v;
        if (!offset.empty()) {
            for (std::size_t i = 0; i < d; ++i) shifted[i] = v[i] + offset[i];
            p = shifted;
        }
        if (!contains(r, p)) return true;
        ++out.count;
        if (options.keep_points) out.points.emplace_back(p.begin(), p.end());
        return !options.stop_at_first;
    });
    return out;
}

}  // namespace

CountResult count_region(const UnimodularLattice& l, const Region& r, CountOptions options) {
    return count_shifted(l, r, {}, options);
}

CountResult count_region(const AffineUnimodularLattice& l, const Region& r, CountOptions options) {
    options.exclude_origin = false;
    return count_shifted(l.lattice(), r, l.offset(), options);
}

bool is_empty(const UnimodularLattice& l, const Region& r, bool exclude_origin) {
    CountOptions o;
    o.exclude_origin = exclude_origin;
    o.stop_at_first = true;
    return count_region(l, r, o).count == 0;
}

bool is_empty(const AffineUnimodularLattice& l, const Region& r) {
    CountOptions o;
    o.stop_at_first = true;
    return count_region(l, r, o).count == 0;
}

std::int64_t required_coeff_bound(const UnimodularLattice& l, const Region& r, std::span<const double> offset) {
    if (r.dim() != l.dim()) throw DimensionMismatch("region dimension does not match lattice");
    const BoundingBall& bb = r.bounding_ball();
    Vector c = bb.center;
    if (!offset.empty()) c = subtract(c, offset);
    const double reach = norm(c) + bb.radius + kBoundarySlack;
    // Coefficient k_i of v = B k is <dual_i, v> with dual_i the i-th row of B^-1.
    const Matrix inv = inverse(l.basis());
    double need = 0.0;
    for (std::size_t i = 0; i < inv.rows(); ++i) {
        double n2 = 0.0;
        for (std::size_t j = 0; j < inv.cols(); ++j) n2 += inv(i, j) * inv(i, j);
        need = std::max(need, std::sqrt(n2) * reach);
    }
    return static_cast<std::int64_t>(std::ceil(need));
}

namespace {

CountResult brute_force_scan(const UnimodularLattice& l, const Region& r, std::int64_t bound,
                             std::span<const double> offset, bool keep_points, bool exclude_origin) {
    const std::int64_t need = required_coeff_bound(l, r, offset);
    if (bound < need)
        throw CoverageError("coefficient bound " + std::to_string(bound) + " does not cover the region (need " +
                            std::to_string(need) + ")");
    const std::size_t d = l.dim();
    const double side = 2.0 * static_cast<double>(bound) + 1.0;
    if (std::pow(side, static_cast<double>(d)) > 1e10) throw Overflow("brute-force scan exceeds 1e10 points");

    const Matrix& b = l.basis();
    std::vector<std::int64_t> k(d, -bound);
    Vector p(d);
    CountResult out;
    while (true) {
        bool zero = true;
        for (std::size_t i = 0; i < d; ++i) {
            double s = offset.empty() ? 0.0 : offset[i];
            for (std::size_t j = 0; j < d; ++j) s += b(i, j) * static_cast<double>(k[j]);
            p[i] = s;
        }
        for (std::int64_t kj : k) zero = zero && kj == 0;
        if (!(exclude_origin && zero) && contains(r, p)) {
            ++out.count;
            if (keep_points) out.points.push_back(p);
        }
        std::size_t i = 0;
        while (i < d && k[i] == bound) k[i++] = -bound;
        if (i == d) break;
        ++k[i];
    }
    return out;
}

}  // namespace

CountResult brute_force_count(const UnimodularLattice& l, const Region& r, std::int64_t coeff_bound,
                              CountOptions options) {
    return brute_force_scan(l, r, coeff_bound, {}, options.keep_points, options.exclude_origin);
}

CountResult brute_force_count(const AffineUnimodularLattice& l, const Region& r, std::int64_t coeff_bound,
                              bool keep_points) {
    return brute_force_scan(l.lattice(), r, coeff_bound, l.offset(), keep_points, false);
}

}  // namespace randlat
