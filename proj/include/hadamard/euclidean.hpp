#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadamard/space.hpp"

namespace hadamard {

/// Flat d-dimensional space with the usual norm; geodesics are segments.
class EuclideanSpace {
  public:
    using Point = std::vector<double>;

    explicit EuclideanSpace(std::size_t dim, double tolerance = kDefaultTolerance)
        : dim_(dim), tol_(checked_tolerance(tolerance)) {
        if (dim_ < 1) throw std::invalid_argument("euclidean dimension must be >= 1");
    }

    std::size_t dimension() const { return dim_; }
    double tolerance() const { return tol_; }

    void validate(const Point& p) const {
        if (p.size() != dim_)
            throw std::invalid_argument("point has dimension " + std::to_string(p.size()) +
                                        ", space expects " + std::to_string(dim_));
        for (double c : p)
            if (!std::isfinite(c)) throw std::invalid_argument("point has non-finite coordinate");
    }

    double distance(const Point& p, const Point& q) const {
        validate(p);
        validate(q);
        double sq = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            const double diff = p[i] - q[i];
            sq += diff * diff;
        }
        return std::sqrt(sq);
    }

    Point geodesic(const Point& p, const Point& q, double t) const {
        validate(p);
        validate(q);
        check_unit_interval(t);
        if (t == 0.0) return p;
        if (t == 1.0) return q;
        Point out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) out[i] = (1.0 - t) * p[i] + t * q[i];
        return out;
    }

  private:
    std::size_t dim_;
    double tol_;
};

}  // namespace hadamard
