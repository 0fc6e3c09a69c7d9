#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>
#include <string>

namespace hadamard {

/// Default numeric tolerance used for degeneracy decisions (point equality,
/// zero-length splits, PD eigenvalue floors). Must stay in [0, 1e-6].
inline constexpr double kDefaultTolerance = 1e-12;

inline double checked_tolerance(double tolerance) {
    if (!(tolerance >= 0.0) || tolerance > 1e-6)
        throw std::invalid_argument("tolerance must lie in [0, 1e-6], got " +
                                    std::to_string(tolerance));
    return tolerance;
}

/// A geodesic metric space backend.
///
/// Backends are immutable value types; `Point` carries the payload.
/// `distance` is the metric, `geodesic(p, q, t)` evaluates the unique
/// constant-speed geodesic from p (t=0) to q (t=1). Implementations must
/// return p exactly at t=0 and q exactly at t=1.
template <typename S>
concept GeodesicSpace = requires(const S s, const typename S::Point& p,
                                 const typename S::Point& q, double t) {
    typename S::Point;
    { s.distance(p, q) } -> std::convertible_to<double>;
    { s.geodesic(p, q, t) } -> std::convertible_to<typename S::Point>;
    { s.tolerance() } -> std::convertible_to<double>;
};

inline void check_unit_interval(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("geodesic parameter t must lie in [0,1], got " +
                                    std::to_string(t));
}

/// Point equality is metric: d(a, b) <= tolerance. Payload identity is too
/// strict for backends with non-unique representations (spider origin,
/// orthant boundaries in tree space).
template <GeodesicSpace S>
bool points_equal(const S& space, const typename S::Point& a, const typename S::Point& b) {
    return space.distance(a, b) <= space.tolerance();
}

/// Signed defect of the quadratic comparison inequality that defines
/// nonpositive curvature:
///
///   d(z, g(t))^2 - [ (1-t) d(z,p)^2 + t d(z,q)^2 - t(1-t) d(p,q)^2 ]
///
/// where g is the geodesic from p to q. A correct backend returns a value
/// <= tolerance (up to floating noise) for every triple and t.
template <GeodesicSpace S>
double cat0_gap(const S& space, const typename S::Point& z, const typename S::Point& p,
                const typename S::Point& q, double t) {
    check_unit_interval(t);
    const auto gt = space.geodesic(p, q, t);
    const double dzg = space.distance(z, gt);
    const double dzp = space.distance(z, p);
    const double dzq = space.distance(z, q);
    const double dpq = space.distance(p, q);
    return dzg * dzg - ((1.0 - t) * dzp * dzp + t * dzq * dzq - t * (1.0 - t) * dpq * dpq);
}

/// Signed defect of the four-point inequality
///
///   d(x,y)^2 + d(u,v)^2 <= d(x,v)^2 + d(y,u)^2 + 2 d(x,u) d(y,v).
///
/// Nonpositive (up to floating noise) in every space of nonpositive
/// curvature; returned signed so tests can scale tolerances.
template <GeodesicSpace S>
double reshetnyak_gap(const S& space, const typename S::Point& x, const typename S::Point& y,
                      const typename S::Point& u, const typename S::Point& v) {
    const double dxy = space.distance(x, y);
    const double duv = space.distance(u, v);
    const double dxv = space.distance(x, v);
    const double dyu = space.distance(y, u);
    const double dxu = space.distance(x, u);
    const double dyv = space.distance(y, v);
    return dxy * dxy + duv * duv - dxv * dxv - dyu * dyu - 2.0 * dxu * dyv;
}

/// Closed geodesic ball, the concrete convex set shipped for projection and
/// feasibility runs.
template <GeodesicSpace S>
struct GeodesicBall {
    typename S::Point center;
    double radius = 0.0;
};

template <GeodesicSpace S>
bool ball_contains(const S& space, const GeodesicBall<S>& ball, const typename S::Point& x) {
    return space.distance(x, ball.center) <= ball.radius + space.tolerance();
}

/// Metric projection onto a closed ball: identity inside, otherwise the
/// geodesic point at parameter radius / d(center, x). Nonexpansive.
template <GeodesicSpace S>
typename S::Point project_ball(const S& space, const GeodesicBall<S>& ball,
                               const typename S::Point& x) {
    if (ball.radius < 0.0) throw std::invalid_argument("ball radius must be nonnegative");
    const double d = space.distance(ball.center, x);
    if (d <= ball.radius) return x;
    return space.geodesic(ball.center, x, ball.radius / d);
}

}  // namespace hadamard
