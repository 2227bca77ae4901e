#include "randlat/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "randlat/errors.hpp"
#include "randlat/rng.hpp"

namespace randlat {

namespace {

constexpr int kOverlapPoints = 10000;
constexpr std::uint64_t kOverlapSeed = 0x5eed0f0e1a9ULL;

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw RegionError(std::string(what) + " must be finite");
}

double region_volume(const Region::Node& node, std::size_t d) {
    return std::visit(
        [d](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            const int di = static_cast<int>(d);
            if constexpr (std::is_same_v<T, Ball>) {
                return unit_ball_volume(di) * std::pow(n.radius, di);
            } else if constexpr (std::is_same_v<T, Box>) {
                double v = 1.0;
                for (std::size_t i = 0; i < d; ++i) v *= n.hi[i] - n.lo[i];
                return v;
            } else if constexpr (std::is_same_v<T, Annulus>) {
                return unit_ball_volume(di) * (std::pow(n.r_out, di) - std::pow(n.r_in, di));
            } else if constexpr (std::is_same_v<T, DisjointUnion>) {
                double v = 0.0;
                for (const Region& m : n.members) v += m.volume();
                return v;
            } else {
                return n.volume;
            }
        },
        node);
}

BoundingBall region_bounds(const Region::Node& node, std::size_t d) {
    return std::visit(
        [d](const auto& n) -> BoundingBall {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return {n.center, n.radius};
            } else if constexpr (std::is_same_v<T, Box>) {
                Vector c(d);
                double r2 = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    c[i] = 0.5 * (n.lo[i] + n.hi[i]);
                    const double h = 0.5 * (n.hi[i] - n.lo[i]);
                    r2 += h * h;
                }
                return {std::move(c), std::sqrt(r2)};
            } else if constexpr (std::is_same_v<T, Annulus>) {
                return {n.center, n.r_out};
            } else if constexpr (std::is_same_v<T, DisjointUnion>) {
                std::vector<BoundingBall> balls;
                balls.reserve(n.members.size());
                for (const Region& m : n.members) balls.push_back(m.bounding_ball());
                if (balls.empty()) return {Vector(d, 0.0), 0.0};
                return enclosing_ball(balls);
            } else {
                return {n.center, n.radius};
            }
        },
        node);
}

// Uniform point in the axis-aligned cube around a bounding ball.
Vector cube_point(const BoundingBall& b, Rng& rng) {
    Vector p(b.center.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = b.center[i] + rng.uniform(-b.radius, b.radius);
    return p;
}

}  // namespace

Region::Region(std::shared_ptr<const Node> node, std::size_t dim) : node_(std::move(node)), dim_(dim) {
    volume_ = region_volume(*node_, dim_);
    bounds_ = region_bounds(*node_, dim_);
}

Region Region::ball(Vector center, double radius) {
    require_finite(center, "ball center");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw RegionError("ball radius must be positive");
    const std::size_t d = center.size();
    return Region(std::make_shared<const Node>(Ball{std::move(center), radius}), d);
}

Region Region::box(Vector lo, Vector hi) {
    if (lo.size() != hi.size()) throw DimensionMismatch("box corners differ in dimension");
    require_finite(lo, "box corner");
    require_finite(hi, "box corner");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw RegionError("box requires lo < hi componentwise");
    const std::size_t d = lo.size();
    return Region(std::make_shared<const Node>(Box{std::move(lo), std::move(hi)}), d);
}

Region Region::annulus(Vector center, double r_in, double r_out) {
    require_finite(center, "annulus center");
    if (!(r_in >= 0.0) || !(r_in < r_out) || !std::isfinite(r_out))
        throw RegionError("annulus requires 0 <= r_in < r_out");
    const std::size_t d = center.size();
    return Region(std::make_shared<const Node>(Annulus{std::move(center), r_in, r_out}), d);
}

Region Region::disjoint_union(std::vector<Region> members) {
    const std::size_t d = members.empty() ? 0 : members.front().dim();
    for (const Region& m : members)
        if (m.dim() != d) throw DimensionMismatch("union members differ in dimension");

    if (members.size() > 1) {
        Rng rng({kOverlapSeed, kAuxiliaryStreamBase});
        const int per_member = kOverlapPoints / static_cast<int>(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            const BoundingBall& b = members[i].bounding_ball();
            for (int t = 0; t < per_member; ++t) {
                const Vector p = cube_point(b, rng);
                if (!contains(members[i], p)) continue;
                for (std::size_t j = 0; j < members.size(); ++j)
                    if (j != i && contains(members[j], p))
                        throw RegionError("union members " + std::to_string(i) + " and " + std::to_string(j) +
                                          " overlap");
            }
        }
    }
    return Region(std::make_shared<const Node>(DisjointUnion{std::move(members)}), d);
}

Region Region::predicate(std::function<bool(std::span<const double>)> member, Vector center, double radius,
                         double volume, std::string label) {
    require_finite(center, "predicate center");
    if (!(radius >= 0.0) || !(volume >= 0.0) || !std::isfinite(volume))
        throw RegionError("predicate requires radius >= 0 and finite volume >= 0");
    if (!member) throw RegionError("predicate requires a membership function");
    const std::size_t d = center.size();
    return Region(std::make_shared<const Node>(
                      Predicate{std::move(member), std::move(center), radius, volume, std::move(label)}),
                  d);
}

double unit_ball_volume(int d) {
    if (d < 1) throw DomainError("unit ball volume needs d >= 1");
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double volume(const Region& r) { return r.volume(); }

BoundingBall bounding_ball(const Region& r) { return r.bounding_ball(); }

bool contains(const Region& r, std::span<const double> v) {
    if (v.size() != r.dim()) throw DimensionMismatch("point dimension does not match region");
    return std::visit(
        [v](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Ball>) {
                double s = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const double t = v[i] - n.center[i];
                    s += t * t;
                }
                return s <= n.radius * n.radius;
            } else if constexpr (std::is_same_v<T, Box>) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (v[i] < n.lo[i] || v[i] > n.hi[i]) return false;
                return true;
            } else if constexpr (std::is_same_v<T, Annulus>) {
                double s = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const double t = v[i] - n.center[i];
                    s += t * t;
                }
                return s <= n.r_out * n.r_out && s >= n.r_in * n.r_in;
            } else if constexpr (std::is_same_v<T, DisjointUnion>) {
                for (const Region& m : n.members)
                    if (contains(m, v)) return true;
                return false;
            } else {
                return n.member(v);
            }
        },
        r.node());
}

BoundingBall enclosing_ball(const std::vector<BoundingBall>& balls) {
    if (balls.empty()) throw RegionError("enclosing ball of an empty set");
    const std::size_t d = balls.front().center.size();
    auto coverage = [&](const Vector& c) {
        double r = 0.0;
        for (const auto& b : balls) r = std::max(r, norm(subtract(c, b.center)) + b.radius);
        return r;
    };

    const bool concentric = std::all_of(balls.begin(), balls.end(), [&](const BoundingBall& b) {
        return b.center == balls.front().center;
    });
    if (concentric) return {balls.front().center, coverage(balls.front().center)};
    for (const auto& b : balls)
        if (coverage(b.center) <= b.radius) return b;

    // Badoiu-Clarkson: step toward the farthest point of the farthest ball.
    Vector c(d, 0.0);
    for (const auto& b : balls)
        for (std::size_t i = 0; i < d; ++i) c[i] += b.center[i] / static_cast<double>(balls.size());
    Vector best = c;
    double best_r = coverage(c);
    for (int k = 1; k <= 4000; ++k) {
        std::size_t far = 0;
        double far_dist = -1.0;
        for (std::size_t i = 0; i < balls.size(); ++i) {
            const double dist = norm(subtract(c, balls[i].center)) + balls[i].radius;
            if (dist > far_dist) {
                far_dist = dist;
                far = i;
            }
        }
        Vector dir = subtract(balls[far].center, c);
        const double len = norm(dir);
        Vector target = balls[far].center;
        if (len > 0.0)
            for (std::size_t i = 0; i < d; ++i) target[i] += balls[far].radius * dir[i] / len;
        const double step = 1.0 / (k + 1.0);
        for (std::size_t i = 0; i < d; ++i) c[i] += step * (target[i] - c[i]);
        const double r = coverage(c);
        if (r < best_r) {
            best_r = r;
            best = c;
        }
    }
    return {best, best_r};
}

Region translated(const Region& r, std::span<const double> shift) {
    if (shift.size() != r.dim()) throw DimensionMismatch("shift dimension does not match region");
    return std::visit(
        [&](const auto& n) -> Region {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return Region::ball(add(n.center, shift), n.radius);
            } else if constexpr (std::is_same_v<T, Box>) {
                return Region::box(add(n.lo, shift), add(n.hi, shift));
            } else if constexpr (std::is_same_v<T, Annulus>) {
                return Region::annulus(add(n.center, shift), n.r_in, n.r_out);
            } else if constexpr (std::is_same_v<T, DisjointUnion>) {
                std::vector<Region> members;
                for (const Region& m : n.members) members.push_back(translated(m, shift));
                return Region::disjoint_union(std::move(members));
            } else {
                Vector s(shift.begin(), shift.end());
                auto inner = n.member;
                return Region::predicate(
                    [inner, s](std::span<const double> v) { return inner(subtract(v, s)); }, add(n.center, s),
                    n.radius, n.volume, n.label);
            }
        },
        r.node());
}

RadialSet::RadialSet(std::vector<std::pair<double, double>> intervals) : intervals_(std::move(intervals)) {
    std::sort(intervals_.begin(), intervals_.end());
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const auto [a, b] = intervals_[i];
        if (!std::isfinite(a) || !std::isfinite(b) || !(a >= 0.0) || !(a < b))
            throw RegionError("radial interval requires 0 <= a < b");
        if (i > 0 && !(intervals_[i - 1].second < a)) throw RegionError("radial intervals overlap");
    }
}

bool RadialSet::contains(double r) const {
    for (const auto& [a, b] : intervals_)
        if (r >= a && r <= b) return true;
    return false;
}

double radial_volume(const RadialSet& s, int d) {
    const double nd = unit_ball_volume(d);
    double v = 0.0;
    for (const auto& [a, b] : s.intervals()) v += nd * (std::pow(b, d) - std::pow(a, d));
    return v;
}

Region lift_radial(const RadialSet& s, int d) {
    const Vector origin(static_cast<std::size_t>(d), 0.0);
    std::vector<Region> shells;
    for (const auto& [a, b] : s.intervals())
        shells.push_back(a == 0.0 ? Region::ball(origin, b) : Region::annulus(origin, a, b));
    if (shells.size() == 1) return shells.front();
    if (shells.empty())
        return Region::predicate([](std::span<const double>) { return false; }, origin, 0.0, 0.0, "empty");
    return Region::disjoint_union(std::move(shells));
}

namespace {

Vector center_or_origin(int d, Vector center) {
    if (center.empty()) return Vector(static_cast<std::size_t>(d), 0.0);
    if (center.size() != static_cast<std::size_t>(d)) throw DimensionMismatch("center dimension mismatch");
    return center;
}

void require_volume(double vol) {
    if (!(vol > 0.0) || !std::isfinite(vol)) throw RegionError("family volume must be positive");
}

}  // namespace

Region ball_of_volume(int d, double vol, Vector center) {
    require_volume(vol);
    return Region::ball(center_or_origin(d, std::move(center)), std::pow(vol / unit_ball_volume(d), 1.0 / d));
}

Region cube_of_volume(int d, double vol, Vector center) {
    return thin_box(d, vol, 1.0, std::move(center));
}

Region annulus_of_volume(int d, double vol, double ratio, Vector center) {
    require_volume(vol);
    if (!(ratio >= 0.0 && ratio < 1.0)) throw RegionError("annulus ratio must lie in [0, 1)");
    const double r_out = std::pow(vol / (unit_ball_volume(d) * (1.0 - std::pow(ratio, d))), 1.0 / d);
    return Region::annulus(center_or_origin(d, std::move(center)), ratio * r_out, r_out);
}

Region thin_box(int d, double vol, double aspect, Vector center) {
    require_volume(vol);
    if (!(aspect > 0.0) || d < 2) throw RegionError("thin box needs aspect > 0 and d >= 2");
    const Vector c = center_or_origin(d, std::move(center));
    const double side = std::pow(vol, 1.0 / d);
    Vector lo(c.size()), hi(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double len = i == 0 ? side * aspect : side / std::pow(aspect, 1.0 / (d - 1));
        lo[i] = c[i] - 0.5 * len;
        hi[i] = c[i] + 0.5 * len;
    }
    return Region::box(std::move(lo), std::move(hi));
}

nlohmann::json region_to_json(const Region& r) {
    using nlohmann::json;
    return std::visit(
        [](const auto& n) -> json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return {{"type", "ball"}, {"center", n.center}, {"radius", n.radius}};
            } else if constexpr (std::is_same_v<T, Box>) {
                return {{"type", "box"}, {"lo", n.lo}, {"hi", n.hi}};
            } else if constexpr (std::is_same_v<T, Annulus>) {
                return {{"type", "annulus"}, {"center", n.center}, {"r_in", n.r_in}, {"r_out", n.r_out}};
            } else if constexpr (std::is_same_v<T, DisjointUnion>) {
                json members = json::array();
                for (const Region& m : n.members) members.push_back(region_to_json(m));
                return {{"type", "union"}, {"members", members}};
            } else {
                return {{"type", "predicate"}, {"label", n.label}, {"volume", n.volume},
                        {"center", n.center}, {"radius", n.radius}};
            }
        },
        r.node());
}

RadialSet radial_from_json(const nlohmann::json& j) {
    const nlohmann::json& arr = j.is_object() ? j.at("intervals") : j;
    if (!arr.is_array()) throw RegionError("radial set must be an array of [a, b] pairs");
    std::vector<std::pair<double, double>> iv;
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw RegionError("radial interval must be a pair of numbers");
        iv.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return RadialSet(std::move(iv));
}

Region region_from_json(const nlohmann::json& j, int d) {
    try {
        if (!j.is_object()) throw RegionError("region spec must be a JSON object");
        const std::string type = j.at("type").get<std::string>();
        Region out = [&]() -> Region {
            if (type == "ball") return Region::ball(j.at("center").get<Vector>(), j.at("radius").get<double>());
            if (type == "box") return Region::box(j.at("lo").get<Vector>(), j.at("hi").get<Vector>());
            if (type == "annulus")
                return Region::annulus(j.at("center").get<Vector>(), j.at("r_in").get<double>(),
                                       j.at("r_out").get<double>());
            if (type == "union") {
                std::vector<Region> members;
                for (const auto& m : j.at("members")) members.push_back(region_from_json(m, d));
                return Region::disjoint_union(std::move(members));
            }
            if (type == "radial") {
                if (d < 2) throw RegionError("radial region needs the ambient dimension");
                return lift_radial(radial_from_json(j), d);
            }
            throw RegionError("unknown region type '" + type + "'");
        }();
        if (d != 0 && out.dim() != static_cast<std::size_t>(d))
            throw DimensionMismatch("region dimension " + std::to_string(out.dim()) + " does not match d=" +
                                    std::to_string(d));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw RegionError(std::string("malformed region JSON: ") + e.what());
    }
}

}  // namespace randlat
