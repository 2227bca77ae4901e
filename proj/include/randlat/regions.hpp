#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "randlat/linalg.hpp"

namespace randlat {

class Region;

struct Ball {
    Vector center;
    double radius;
};

struct Box {
    Vector lo;
    Vector hi;
};

/// {v : r_in <= |v - center| <= r_out}; r_in may be 0.
struct Annulus {
    Vector center;
    double r_in;
    double r_out;
};

struct DisjointUnion {
    std::vector<Region> members;
};

/// User-supplied membership test. Volume and bounding ball are declared by
/// the caller and never integrated.
struct Predicate {
    std::function<bool(std::span<const double>)> member;
    Vector center;
    double radius;
    double volume;
    std::string label;
};

struct BoundingBall {
    Vector center;
    double radius;
};

/// Bounded measurable subset of R^d. Closed sets: boundaries are members.
class Region {
public:
    using Node = std::variant<Ball, Box, Annulus, DisjointUnion, Predicate>;

    static Region ball(Vector center, double radius);
    static Region box(Vector lo, Vector hi);
    static Region annulus(Vector center, double r_in, double r_out);
    /// Checks pairwise disjointness with 10^4 Monte Carlo points; any point
    /// found in two members throws RegionError.
    static Region disjoint_union(std::vector<Region> members);
    static Region predicate(std::function<bool(std::span<const double>)> member, Vector center, double radius,
                            double volume, std::string label = "predicate");

    std::size_t dim() const { return dim_; }
    const Node& node() const { return *node_; }
    double volume() const { return volume_; }
    const BoundingBall& bounding_ball() const { return bounds_; }

private:
    Region(std::shared_ptr<const Node> node, std::size_t dim);
    std::shared_ptr<const Node> node_;
    std::size_t dim_ = 0;
    double volume_ = 0.0;
    BoundingBall bounds_;
};

/// N_d = pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

double volume(const Region& r);
/// Throws DimensionMismatch when v has the wrong length.
bool contains(const Region& r, std::span<const double> v);
BoundingBall bounding_ball(const Region& r);

/// Ball enclosing a set of balls: exact when one member contains the rest,
/// otherwise within about 1e-3 relative of the smallest.
BoundingBall enclosing_ball(const std::vector<BoundingBall>& balls);

Region translated(const Region& r, std::span<const double> shift);

/// Finite union of disjoint closed intervals [a_i, b_i] in R^+, sorted.
class RadialSet {
public:
    RadialSet() = default;
    /// Sorts, then throws RegionError on a < 0, a >= b, or overlap.
    explicit RadialSet(std::vector<std::pair<double, double>> intervals);

    const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }
    double max_radius() const { return intervals_.empty() ? 0.0 : intervals_.back().second; }
    bool contains(double r) const;

private:
    std::vector<std::pair<double, double>> intervals_;
};

/// sum_i N_d (b_i^d - a_i^d), the measure of {v : |v| in S}.
double radial_volume(const RadialSet& s, int d);

/// {v in R^d : |v| in S} as annuli about the origin; [0, b] becomes a ball.
Region lift_radial(const RadialSet& s, int d);

// Region families used by verification and sweeps, all centered at `center`
// (origin when empty).
Region ball_of_volume(int d, double vol, Vector center = {});
Region cube_of_volume(int d, double vol, Vector center = {});
/// Annulus with r_in = ratio * r_out.
Region annulus_of_volume(int d, double vol, double ratio, Vector center = {});
/// Box of volume V: one side V^{1/d} t, the other d-1 sides V^{1/d} / t^{1/(d-1)}.
Region thin_box(int d, double vol, double aspect, Vector center = {});

nlohmann::json region_to_json(const Region& r);
/// Parses the JSON region schema. `d` is required for "radial" specs and
/// used to validate other specs when nonzero.
Region region_from_json(const nlohmann::json& j, int d = 0);
RadialSet radial_from_json(const nlohmann::json& j);

}  // namespace randlat
