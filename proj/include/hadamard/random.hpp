#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace hadamard {

/// Deterministic sample stream for the randomized solvers.
///
/// The engine is std::mt19937_64 seeded directly; the C++ standard pins its
/// output sequence down, so equal seeds replay the same indices on every
/// platform. Unit reals take the top 53 bits of one engine draw; indices are
/// drawn by inverting the cumulative weight table with one unit real. The
/// uniform and weighted paths share this primitive, so a uniform-weight
/// stream and an equally seeded uniform stream coincide draw for draw.
class SampleStream {
  public:
    static constexpr std::string_view kGeneratorId = "mt19937_64/top53-cdf";

    explicit SampleStream(std::uint64_t seed) : engine_(seed) {}

    double unit_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("cannot sample from an empty range");
        const double u = unit_real();
        const double w = 1.0 / static_cast<double>(n);
        double cumulative = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            cumulative += w;
            if (u < cumulative) return i;
        }
        return n - 1;
    }

    /// Index distributed according to `weights` (positive, summing to one).
    std::size_t weighted_index(std::span<const double> weights) {
        if (weights.empty()) throw std::invalid_argument("cannot sample from an empty range");
        const double u = unit_real();
        double cumulative = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            cumulative += weights[i];
            if (u < cumulative) return i;
        }
        return weights.size() - 1;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace hadamard
