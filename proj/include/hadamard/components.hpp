#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "hadamard/space.hpp"

namespace hadamard {

/// Anchor points with strictly positive weights. Weights are normalized to
/// sum to one on construction.
template <GeodesicSpace S>
struct AnchorConfiguration {
    std::vector<typename S::Point> anchors;
    std::vector<double> weights;

    AnchorConfiguration(std::vector<typename S::Point> points, std::vector<double> raw_weights)
        : anchors(std::move(points)), weights(std::move(raw_weights)) {
        if (anchors.empty()) throw std::invalid_argument("need at least one anchor");
        if (weights.size() != anchors.size())
            throw std::invalid_argument("weight count does not match anchor count");
        double total = 0.0;
        for (double w : weights) {
            if (!(w > 0.0) || !std::isfinite(w))
                throw std::invalid_argument("weights must be positive and finite");
            total += w;
        }
        for (double& w : weights) w /= total;
    }

    static AnchorConfiguration uniform(std::vector<typename S::Point> points) {
        std::vector<double> w(points.size(), 1.0);
        return AnchorConfiguration(std::move(points), std::move(w));
    }

    std::size_t size() const { return anchors.size(); }
};

inline void check_prox_parameters(double weight, double lambda) {
    if (!(weight > 0.0)) throw std::invalid_argument("prox weight must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("prox parameter lambda must be positive");
}

/// Resolvent of x -> w d(x, anchor)^2: the geodesic point toward the anchor
/// at parameter t = 2 l w / (1 + 2 l w).
template <GeodesicSpace S>
typename S::Point prox_scaled_squared_distance(const S& space, const typename S::Point& anchor,
                                               double weight, double lambda,
                                               const typename S::Point& x,
                                               double* t_used = nullptr) {
    check_prox_parameters(weight, lambda);
    const double s = 2.0 * lambda * weight;
    const double t = s / (1.0 + s);
    if (t_used) *t_used = t;
    return space.geodesic(x, anchor, t);
}

/// Resolvent of x -> w d(x, anchor): the geodesic point toward the anchor at
/// t = min{1, l w / d(anchor, x)}. Within tolerance of the anchor the
/// resolvent is the anchor itself (the limit of the formula).
template <GeodesicSpace S>
typename S::Point prox_scaled_distance(const S& space, const typename S::Point& anchor,
                                       double weight, double lambda, const typename S::Point& x,
                                       double* t_used = nullptr) {
    check_prox_parameters(weight, lambda);
    const double d = space.distance(anchor, x);
    const double t = d <= space.tolerance() ? 1.0 : std::min(1.0, lambda * weight / d);
    if (t_used) *t_used = t;
    return space.geodesic(x, anchor, t);
}

/// Resolvent of the indicator of a closed ball: the metric projection,
/// independent of lambda.
template <GeodesicSpace S>
typename S::Point prox_indicator(const S& space, const GeodesicBall<S>& ball,
                                 const typename S::Point& x) {
    return project_ball(space, ball, x);
}

/// Resolvent of x -> w d(x; C) for a closed ball C: step toward the
/// projection with t = min{1, l w / d(P x, x)}; the identity inside C.
template <GeodesicSpace S>
typename S::Point prox_scaled_set_distance(const S& space, const GeodesicBall<S>& ball,
                                           double weight, double lambda,
                                           const typename S::Point& x, double* t_used = nullptr) {
    check_prox_parameters(weight, lambda);
    const auto projected = project_ball(space, ball, x);
    const double d = space.distance(projected, x);
    if (d <= space.tolerance()) {
        if (t_used) *t_used = 0.0;
        return x;
    }
    const double t = std::min(1.0, lambda * weight / d);
    if (t_used) *t_used = t;
    return space.geodesic(x, projected, t);
}

/// One summand of a finite-sum objective, exposed through its value and its
/// resolvent. Custom components can be built from any pair of callables.
template <GeodesicSpace S>
struct Component {
    using Point = typename S::Point;
    struct ProxResult {
        Point point;
        double t = 0.0;
    };

    std::string_view kind;
    std::function<double(const S&, const Point&)> value;
    std::function<ProxResult(const S&, double lambda, const Point&)> prox;
};

template <GeodesicSpace S>
Component<S> squared_distance_component(typename S::Point anchor, double weight) {
    if (!(weight > 0.0)) throw std::invalid_argument("component weight must be positive");
    using C = Component<S>;
    C component;
    component.kind = "scaled_squared_distance";
    component.value = [anchor, weight](const S& space, const typename S::Point& x) {
        const double d = space.distance(x, anchor);
        return weight * d * d;
    };
    component.prox = [anchor, weight](const S& space, double lambda,
                                      const typename S::Point& x) {
        typename C::ProxResult out;
        out.point = prox_scaled_squared_distance(space, anchor, weight, lambda, x, &out.t);
        return out;
    };
    return component;
}

template <GeodesicSpace S>
Component<S> distance_component(typename S::Point anchor, double weight) {
    if (!(weight > 0.0)) throw std::invalid_argument("component weight must be positive");
    using C = Component<S>;
    C component;
    component.kind = "scaled_distance";
    component.value = [anchor, weight](const S& space, const typename S::Point& x) {
        return weight * space.distance(x, anchor);
    };
    component.prox = [anchor, weight](const S& space, double lambda,
                                      const typename S::Point& x) {
        typename C::ProxResult out;
        out.point = prox_scaled_distance(space, anchor, weight, lambda, x, &out.t);
        return out;
    };
    return component;
}

template <GeodesicSpace S>
Component<S> indicator_component(GeodesicBall<S> ball) {
    using C = Component<S>;
    C component;
    component.kind = "indicator";
    component.value = [ball](const S& space, const typename S::Point& x) {
        return ball_contains(space, ball, x) ? 0.0 : std::numeric_limits<double>::infinity();
    };
    component.prox = [ball](const S& space, double, const typename S::Point& x) {
        return typename C::ProxResult{prox_indicator(space, ball, x), 1.0};
    };
    return component;
}

template <GeodesicSpace S>
Component<S> set_distance_component(GeodesicBall<S> ball, double weight) {
    if (!(weight > 0.0)) throw std::invalid_argument("component weight must be positive");
    using C = Component<S>;
    C component;
    component.kind = "scaled_set_distance";
    component.value = [ball, weight](const S& space, const typename S::Point& x) {
        return weight * std::max(0.0, space.distance(x, ball.center) - ball.radius);
    };
    component.prox = [ball, weight](const S& space, double lambda,
                                    const typename S::Point& x) {
        typename C::ProxResult out;
        out.point = prox_scaled_set_distance(space, ball, weight, lambda, x, &out.t);
        return out;
    };
    return component;
}

template <GeodesicSpace S>
std::vector<Component<S>> mean_components(const AnchorConfiguration<S>& data) {
    std::vector<Component<S>> out;
    out.reserve(data.size());
    for (std::size_t n = 0; n < data.size(); ++n)
        out.push_back(squared_distance_component<S>(data.anchors[n], data.weights[n]));
    return out;
}

template <GeodesicSpace S>
std::vector<Component<S>> median_components(const AnchorConfiguration<S>& data) {
    std::vector<Component<S>> out;
    out.reserve(data.size());
    for (std::size_t n = 0; n < data.size(); ++n)
        out.push_back(distance_component<S>(data.anchors[n], data.weights[n]));
    return out;
}

/// Sum of the component values; +infinity as soon as an indicator is
/// violated.
template <GeodesicSpace S>
double objective_value(const S& space, std::span<const Component<S>> components,
                       const typename S::Point& x) {
    double total = 0.0;
    for (const Component<S>& c : components) total += c.value(space, x);
    return total;
}

/// Defect of the strengthened optimality condition of the mean:
///
///   sum_n w_n d(z, a_n)^2 - sum_n w_n d(c, a_n)^2 - d(z, c)^2
///
/// which is nonnegative for every z when c is the true mean.
template <GeodesicSpace S>
double variance_gap(const S& space, const AnchorConfiguration<S>& data,
                    const typename S::Point& candidate, const typename S::Point& z) {
    double at_z = 0.0, at_candidate = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
        const double dz = space.distance(z, data.anchors[n]);
        const double dc = space.distance(candidate, data.anchors[n]);
        at_z += data.weights[n] * dz * dz;
        at_candidate += data.weights[n] * dc * dc;
    }
    const double dzc = space.distance(z, candidate);
    return at_z - at_candidate - dzc * dzc;
}

}  // namespace hadamard
