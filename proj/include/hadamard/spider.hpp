#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "hadamard/space.hpp"

namespace hadamard {

/// Point of a k-spider: a ray index and a distance from the shared origin.
/// The origin is canonically (ray 0, radius 0); radii at or below the space
/// tolerance collapse to it.
struct SpiderPoint {
    int ray = 0;
    double radius = 0.0;
};

/// Finitely many half-lines glued at one origin. An R-tree: the path between
/// points on distinct rays runs through the origin.
class SpiderSpace {
  public:
    using Point = SpiderPoint;

    explicit SpiderSpace(int ray_count, double tolerance = kDefaultTolerance)
        : rays_(ray_count), tol_(checked_tolerance(tolerance)) {
        if (rays_ < 3) throw std::invalid_argument("spider needs at least 3 rays");
    }

    int ray_count() const { return rays_; }
    double tolerance() const { return tol_; }

    Point canonical(Point p) const {
        validate(p);
        if (p.radius <= tol_) return Point{0, 0.0};
        return p;
    }

    void validate(const Point& p) const {
        if (p.ray < 0 || p.ray >= rays_)
            throw std::invalid_argument("ray index " + std::to_string(p.ray) +
                                        " outside [0, " + std::to_string(rays_) + ")");
        if (!(p.radius >= 0.0) || !std::isfinite(p.radius))
            throw std::invalid_argument("spider radius must be finite and nonnegative");
    }

    double distance(const Point& p, const Point& q) const {
        const Point a = canonical(p);
        const Point b = canonical(q);
        if (a.ray == b.ray || a.radius == 0.0 || b.radius == 0.0)
            return std::abs(a.radius - b.radius);
        return a.radius + b.radius;
    }

    Point geodesic(const Point& p, const Point& q, double t) const {
        check_unit_interval(t);
        const Point a = canonical(p);
        const Point b = canonical(q);
        if (t == 0.0) return a;
        if (t == 1.0) return b;
        if (a.ray == b.ray || a.radius == 0.0 || b.radius == 0.0) {
            const int ray = a.radius == 0.0 ? b.ray : a.ray;
            return canonical(Point{ray, (1.0 - t) * a.radius + t * b.radius});
        }
        // Distinct rays: walk down a's ray, cross the origin at arc length
        // a.radius, then walk up b's ray.
        const double s = t * (a.radius + b.radius);
        if (s <= a.radius) return canonical(Point{a.ray, a.radius - s});
        return canonical(Point{b.ray, s - a.radius});
    }

  private:
    int rays_;
    double tol_;
};

}  // namespace hadamard
