#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hadamard/components.hpp"
#include "hadamard/random.hpp"
#include "hadamard/space.hpp"

namespace hadamard {

/// Proximal parameter sequence. The canonical form l_k = C/(k+1) diverges in
/// sum while its squares stay summable; a custom generator can replace it.
struct StepSchedule {
    double constant = 1.0;
    std::function<double(std::size_t)> custom;

    static StepSchedule harmonic(double constant) {
        if (!(constant > 0.0)) throw std::invalid_argument("schedule constant must be positive");
        return StepSchedule{constant, nullptr};
    }

    double operator()(std::size_t k) const {
        const double lambda =
            custom ? custom(k) : constant / static_cast<double>(k + 1);
        if (!(lambda > 0.0))
            throw std::invalid_argument("schedule produced a nonpositive lambda at step " +
                                        std::to_string(k));
        return lambda;
    }

    std::string_view form() const { return custom ? "custom" : "C/(k+1)"; }
};

struct RunConfig {
    std::size_t budget = 20000;        // cycles (cyclic) or steps (random / inductive)
    double movement_tolerance = 0.0;   // 0 disables the movement stop
    std::uint64_t seed = 0;            // random variants only
    StepSchedule schedule{};
    bool record_trace = true;          // per-step records; the final point always survives

    void check() const {
        if (budget < 1) throw std::invalid_argument("budget must be at least 1");
        if (!(movement_tolerance >= 0.0))
            throw std::invalid_argument("movement tolerance must be nonnegative");
    }
};

enum class StopReason { budget, tolerance };

inline std::string_view to_string(StopReason reason) {
    return reason == StopReason::budget ? "budget" : "tolerance";
}

/// Record of one solver run. `iterates`/`objectives`/`steps` are filled only
/// when trace recording is on; the final point, step count, and stop reason
/// are always set.
template <GeodesicSpace S>
struct IterationTrace {
    struct StepInfo {
        std::size_t component = 0;
        double lambda = 0.0;
        double t = 0.0;
        double moved = 0.0;
    };

    std::vector<typename S::Point> iterates;  // x_0, x_1, ...
    std::vector<double> objectives;           // aligned with iterates
    std::vector<StepInfo> steps;              // transition i -> i+1
    typename S::Point final_point;
    double final_objective = 0.0;
    std::size_t total_steps = 0;
    StopReason stop_reason = StopReason::budget;
    std::uint64_t seed = 0;
    std::string_view generator;  // empty for the deterministic variants
};

namespace detail {

template <GeodesicSpace S>
class TraceBuilder {
  public:
    TraceBuilder(const S& space, std::span<const Component<S>> components, bool record)
        : space_(space), components_(components), record_(record) {}

    void start(const typename S::Point& x0) {
        if (!record_) return;
        trace_.iterates.push_back(x0);
        trace_.objectives.push_back(objective_value(space_, components_, x0));
    }

    void step(const typename S::Point& next, std::size_t component, double lambda, double t,
              double moved) {
        if (!record_) return;
        trace_.iterates.push_back(next);
        trace_.objectives.push_back(objective_value(space_, components_, next));
        trace_.steps.push_back({component, lambda, t, moved});
    }

    IterationTrace<S> finish(typename S::Point final_point, std::size_t total_steps,
                             StopReason reason) {
        trace_.final_objective = objective_value(space_, components_, final_point);
        trace_.final_point = std::move(final_point);
        trace_.total_steps = total_steps;
        trace_.stop_reason = reason;
        return std::move(trace_);
    }

  private:
    const S& space_;
    std::span<const Component<S>> components_;
    bool record_;
    IterationTrace<S> trace_;
};

}  // namespace detail

/// Applies the component resolvents in a fixed order, one full sweep per
/// cycle, with the proximal parameter held constant within a cycle. Stops at
/// the cycle budget, or earlier once the movement accumulated over a full
/// cycle drops to the tolerance.
template <GeodesicSpace S>
IterationTrace<S> ppa_cyclic(const S& space, std::span<const Component<S>> components,
                             typename S::Point x0, const RunConfig& config) {
    config.check();
    if (components.empty()) throw std::invalid_argument("component list is empty");
    detail::TraceBuilder<S> trace(space, components, config.record_trace);
    trace.start(x0);
    const bool need_movement = config.record_trace || config.movement_tolerance > 0.0;
    typename S::Point x = std::move(x0);
    std::size_t total = 0;
    StopReason reason = StopReason::budget;
    for (std::size_t k = 0; k < config.budget; ++k) {
        const double lambda = config.schedule(k);
        double cycle_movement = 0.0;
        for (std::size_t n = 0; n < components.size(); ++n) {
            auto result = components[n].prox(space, lambda, x);
            const double moved = need_movement ? space.distance(x, result.point) : 0.0;
            cycle_movement += moved;
            x = std::move(result.point);
            ++total;
            trace.step(x, n, lambda, result.t, moved);
        }
        if (config.movement_tolerance > 0.0 && cycle_movement <= config.movement_tolerance) {
            reason = StopReason::tolerance;
            break;
        }
    }
    return trace.finish(std::move(x), total, reason);
}

/// Applies at every step the resolvent of one component drawn uniformly at
/// random from the seeded stream. The proximal parameter advances every
/// step. Stops at the step budget, or earlier once the movement over a
/// trailing window of N steps drops to the tolerance.
template <GeodesicSpace S>
IterationTrace<S> ppa_random(const S& space, std::span<const Component<S>> components,
                             typename S::Point x0, const RunConfig& config) {
    config.check();
    if (components.empty()) throw std::invalid_argument("component list is empty");
    detail::TraceBuilder<S> trace(space, components, config.record_trace);
    trace.start(x0);
    const bool need_movement = config.record_trace || config.movement_tolerance > 0.0;
    SampleStream stream(config.seed);
    typename S::Point x = std::move(x0);
    std::vector<double> window(components.size(), 0.0);
    std::size_t total = 0;
    StopReason reason = StopReason::budget;
    for (std::size_t k = 0; k < config.budget; ++k) {
        const double lambda = config.schedule(k);
        const std::size_t r = stream.uniform_index(components.size());
        auto result = components[r].prox(space, lambda, x);
        const double moved = need_movement ? space.distance(x, result.point) : 0.0;
        x = std::move(result.point);
        ++total;
        trace.step(x, r, lambda, result.t, moved);
        window[k % window.size()] = moved;
        if (config.movement_tolerance > 0.0 && k + 1 >= window.size()) {
            double recent = 0.0;
            for (double m : window) recent += m;
            if (recent <= config.movement_tolerance) {
                reason = StopReason::tolerance;
                break;
            }
        }
    }
    auto out = trace.finish(std::move(x), total, reason);
    out.seed = config.seed;
    out.generator = SampleStream::kGeneratorId;
    return out;
}

/// Inductive-mean estimator: start at one anchor sampled by weight, then pull
/// the running point a 1/(k+1) fraction toward each further weighted sample.
/// Deterministic per seed; `steps` counts the samples drawn.
template <GeodesicSpace S>
IterationTrace<S> lln_mean(const S& space, const AnchorConfiguration<S>& data,
                           std::uint64_t seed, std::size_t steps, bool record_trace = true) {
    if (steps < 1) throw std::invalid_argument("steps must be at least 1");
    const auto components = mean_components(data);
    detail::TraceBuilder<S> trace(space, components, record_trace);
    SampleStream stream(seed);
    typename S::Point x = data.anchors[stream.weighted_index(data.weights)];
    trace.start(x);
    for (std::size_t k = 1; k < steps; ++k) {
        const std::size_t r = stream.weighted_index(data.weights);
        const double t = 1.0 / static_cast<double>(k + 1);
        auto next = space.geodesic(x, data.anchors[r], t);
        const double moved = record_trace ? space.distance(x, next) : 0.0;
        x = std::move(next);
        trace.step(x, r, 0.0, t, moved);
    }
    auto out = trace.finish(std::move(x), steps, StopReason::budget);
    out.seed = seed;
    out.generator = SampleStream::kGeneratorId;
    return out;
}

enum class MeanVariant { cyclic, random, lln };
enum class MedianVariant { cyclic, random };

/// Minimizes the weighted sum of squared distances to the anchors. The
/// starting point is the first anchor.
template <GeodesicSpace S>
std::pair<typename S::Point, IterationTrace<S>> frechet_mean(const S& space,
                                                             const AnchorConfiguration<S>& data,
                                                             MeanVariant variant,
                                                             const RunConfig& config) {
    if (variant == MeanVariant::lln) {
        auto trace = lln_mean(space, data, config.seed, config.budget, config.record_trace);
        auto point = trace.final_point;
        return {std::move(point), std::move(trace)};
    }
    const auto components = mean_components(data);
    auto trace = variant == MeanVariant::cyclic
                     ? ppa_cyclic<S>(space, components, data.anchors[0], config)
                     : ppa_random<S>(space, components, data.anchors[0], config);
    auto point = trace.final_point;
    return {std::move(point), std::move(trace)};
}

/// Minimizes the weighted sum of distances to the anchors. Minimizers need
/// not be unique; the run converges to one of them.
template <GeodesicSpace S>
std::pair<typename S::Point, IterationTrace<S>> geometric_median(
    const S& space, const AnchorConfiguration<S>& data, MedianVariant variant,
    const RunConfig& config) {
    const auto components = median_components(data);
    auto trace = variant == MedianVariant::cyclic
                     ? ppa_cyclic<S>(space, components, data.anchors[0], config)
                     : ppa_random<S>(space, components, data.anchors[0], config);
    auto point = trace.final_point;
    return {std::move(point), std::move(trace)};
}

/// Approximates the gradient-flow semigroup of the component sum at time t
/// by k sweeps of the component resolvents with fixed parameter t/k.
template <GeodesicSpace S>
typename S::Point lie_trotter_kato(const S& space, std::span<const Component<S>> components,
                                   typename S::Point x0, double t, std::size_t k) {
    if (components.empty()) throw std::invalid_argument("component list is empty");
    if (!(t >= 0.0)) throw std::invalid_argument("flow time must be nonnegative");
    if (k < 1) throw std::invalid_argument("resolvent power k must be at least 1");
    if (t == 0.0) return x0;
    const double lambda = t / static_cast<double>(k);
    typename S::Point x = std::move(x0);
    for (std::size_t cycle = 0; cycle < k; ++cycle)
        for (const Component<S>& component : components)
            x = component.prox(space, lambda, x).point;
    return x;
}

}  // namespace hadamard
