#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadamard/components.hpp"
#include "hadamard/euclidean.hpp"
#include "hadamard/solvers.hpp"
#include "hadamard/spider.hpp"

namespace hadamard {

/// One oracle-versus-solver comparison.
struct OracleReport {
    std::string instance;
    double oracle_value = 0.0;
    double solver_value = 0.0;
    double absolute_gap = 0.0;
    double relative_gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Two-sided comparison: gap is |solver - oracle|.
inline OracleReport compare_report(std::string instance, double oracle_value,
                                   double solver_value, double tolerance) {
    OracleReport report;
    report.instance = std::move(instance);
    report.oracle_value = oracle_value;
    report.solver_value = solver_value;
    report.absolute_gap = std::abs(solver_value - oracle_value);
    report.relative_gap = report.absolute_gap / (1.0 + std::abs(oracle_value));
    report.tolerance = tolerance;
    report.pass = report.absolute_gap <= tolerance;
    return report;
}

/// One-sided comparison: the solver value must not exceed the bound.
inline OracleReport bound_report(std::string instance, double bound, double solver_value) {
    OracleReport report;
    report.instance = std::move(instance);
    report.oracle_value = bound;
    report.solver_value = solver_value;
    report.absolute_gap = std::max(0.0, solver_value - bound);
    report.relative_gap = report.absolute_gap / (1.0 + std::abs(bound));
    report.tolerance = 0.0;
    report.pass = solver_value <= bound;
    return report;
}

namespace oracle_detail {

inline double norm_diff(std::span<const double> a, std::span<const double> b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

}  // namespace oracle_detail

/// The flat-space mean is the weighted arithmetic average, exactly.
inline std::vector<double> euclidean_mean_closed_form(
    const AnchorConfiguration<EuclideanSpace>& data) {
    std::vector<double> mean(data.anchors[0].size(), 0.0);
    for (std::size_t n = 0; n < data.size(); ++n)
        for (std::size_t i = 0; i < mean.size(); ++i)
            mean[i] += data.weights[n] * data.anchors[n][i];
    return mean;
}

/// Fixed-point iteration for the flat-space median,
///
///   x  <-  sum_n (w_n / d_n) a_n  /  sum_n (w_n / d_n),
///
/// with the standard remedy when an iterate lands on an anchor: if the
/// leftover pull sum_{n != j} w_n (a_n - a_j)/d_n has norm at most w_j the
/// anchor is optimal and is returned, otherwise the iterate steps off along
/// that pull. Implemented directly on coordinate vectors; shares nothing
/// with the solver paths it verifies.
inline std::vector<double> weiszfeld_median(const AnchorConfiguration<EuclideanSpace>& data,
                                            std::size_t max_iterations = 10000,
                                            double tol = 1e-12) {
    const std::size_t dim = data.anchors[0].size();
    std::vector<double> x = euclidean_mean_closed_form(data);
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        double hit_weight = 0.0;
        double scale = 1.0;
        for (const auto& a : data.anchors)
            for (double c : a) scale = std::max(scale, std::abs(c));
        std::vector<double> pull(dim, 0.0), average(dim, 0.0);
        double inv_sum = 0.0;
        for (std::size_t n = 0; n < data.size(); ++n) {
            const double d = oracle_detail::norm_diff(x, data.anchors[n]);
            if (d <= 1e-14 * scale) {
                hit_weight += data.weights[n];
                continue;
            }
            const double q = data.weights[n] / d;
            inv_sum += q;
            for (std::size_t i = 0; i < dim; ++i) {
                average[i] += q * data.anchors[n][i];
                pull[i] += data.weights[n] * (data.anchors[n][i] - x[i]) / d;
            }
        }
        if (inv_sum == 0.0) return x;  // all anchors coincide with x
        double pull_norm = 0.0;
        for (double c : pull) pull_norm += c * c;
        pull_norm = std::sqrt(pull_norm);
        std::vector<double> next(dim);
        if (hit_weight > 0.0) {
            if (pull_norm <= hit_weight) return x;  // subgradient optimality at the anchor
            const double eta = std::min(1.0, hit_weight / pull_norm);
            for (std::size_t i = 0; i < dim; ++i)
                next[i] = (1.0 - eta) * (average[i] / inv_sum) + eta * x[i];
        } else {
            for (std::size_t i = 0; i < dim; ++i) next[i] = average[i] / inv_sum;
        }
        const double moved = oracle_detail::norm_diff(next, x);
        x = std::move(next);
        if (moved <= tol) break;
    }
    return x;
}

struct SpiderSearchResult {
    SpiderPoint point;
    double objective = 0.0;
};

/// Any minimizer of a sum of distance powers on a spider lies on one of the
/// rays, where the objective is one-dimensional and convex. Exhaustive
/// per-ray ternary search; the distance arithmetic is inlined so the oracle
/// stays independent of the backend implementation.
inline SpiderSearchResult spider_1d_search(const SpiderSpace& space,
                                           const AnchorConfiguration<SpiderSpace>& data,
                                           int power, std::size_t refine_iterations = 200) {
    if (power != 1 && power != 2) throw std::invalid_argument("power must be 1 or 2");
    double reach = 0.0;
    for (const auto& a : data.anchors) reach = std::max(reach, a.radius);
    const auto objective_on_ray = [&](int ray, double r) {
        double total = 0.0;
        for (std::size_t n = 0; n < data.size(); ++n) {
            const SpiderPoint& a = data.anchors[n];
            const bool same = a.radius <= space.tolerance() || a.ray == ray;
            const double d = same ? std::abs(r - a.radius) : r + a.radius;
            total += data.weights[n] * (power == 1 ? d : d * d);
        }
        return total;
    };
    SpiderSearchResult best;
    best.point = SpiderPoint{0, 0.0};
    best.objective = objective_on_ray(0, 0.0);
    for (int ray = 0; ray < space.ray_count(); ++ray) {
        double lo = 0.0, hi = reach;
        for (std::size_t i = 0; i < refine_iterations; ++i) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (objective_on_ray(ray, m1) <= objective_on_ray(ray, m2))
                hi = m2;
            else
                lo = m1;
        }
        const double r = 0.5 * (lo + hi);
        const double value = objective_on_ray(ray, r);
        if (value < best.objective) {
            best.objective = value;
            best.point = space.canonical(SpiderPoint{ray, r});
        }
    }
    return best;
}

/// Golden-section minimization of the defining prox objective
///
///   component.value(g(t)) + d(x, g(t))^2 / (2 lambda)
///
/// along the geodesic from x to the component's anchor. Verifies the
/// closed-form t-coefficients without touching the prox implementations.
template <GeodesicSpace S>
typename S::Point prox_1d_oracle(const S& space, const Component<S>& component,
                                 const typename S::Point& anchor, double lambda,
                                 const typename S::Point& x, double resolution = 1e-9) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const auto objective = [&](double t) {
        const auto gt = space.geodesic(x, anchor, t);
        const double d = space.distance(x, gt);
        return component.value(space, gt) + d * d / (2.0 * lambda);
    };
    constexpr double inv_phi = 0.6180339887498949;
    double lo = 0.0, hi = 1.0;
    double m1 = hi - inv_phi * (hi - lo);
    double m2 = lo + inv_phi * (hi - lo);
    double f1 = objective(m1);
    double f2 = objective(m2);
    while (hi - lo > resolution) {
        if (f1 <= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - inv_phi * (hi - lo);
            f1 = objective(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + inv_phi * (hi - lo);
            f2 = objective(m2);
        }
    }
    return space.geodesic(x, anchor, 0.5 * (lo + hi));
}

/// Monte-Carlo check of the inductive-mean error recursion: the mean squared
/// distance to the true mean after k samples is bounded by (minimum
/// objective value)/k. One report row per checkpoint; a row passes when the
/// empirical mean stays within three standard errors of the bound.
template <GeodesicSpace S>
std::vector<OracleReport> lln_rate_report(const S& space, const AnchorConfiguration<S>& data,
                                          const typename S::Point& true_mean,
                                          std::size_t seed_count,
                                          std::span<const std::size_t> checkpoints) {
    if (seed_count == 0) throw std::invalid_argument("need at least one seed");
    std::size_t max_step = 1;
    for (std::size_t k : checkpoints) {
        if (k < 1) throw std::invalid_argument("checkpoints must be >= 1");
        max_step = std::max(max_step, k);
    }
    double xi = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
        const double d = space.distance(true_mean, data.anchors[n]);
        xi += data.weights[n] * d * d;
    }
    std::vector<double> mean(checkpoints.size(), 0.0), m2(checkpoints.size(), 0.0);
    for (std::uint64_t seed = 1; seed <= seed_count; ++seed) {
        const auto trace = lln_mean(space, data, seed, max_step);
        for (std::size_t c = 0; c < checkpoints.size(); ++c) {
            const double d = space.distance(true_mean, trace.iterates[checkpoints[c] - 1]);
            const double sq = d * d;
            const double count = static_cast<double>(seed);
            const double delta = sq - mean[c];
            mean[c] += delta / count;
            m2[c] += delta * (sq - mean[c]);
        }
    }
    std::vector<OracleReport> rows;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        const double k = static_cast<double>(checkpoints[c]);
        const double variance = seed_count > 1 ? m2[c] / static_cast<double>(seed_count - 1) : 0.0;
        const double stderr_mean = std::sqrt(variance / static_cast<double>(seed_count));
        rows.push_back(bound_report(
            "lln rate k=" + std::to_string(checkpoints[c]) + " (bound xi/k + 3 SE)",
            xi / k + 3.0 * stderr_mean, mean[c]));
    }
    return rows;
}

}  // namespace hadamard
