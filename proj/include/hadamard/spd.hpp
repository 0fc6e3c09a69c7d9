#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "hadamard/space.hpp"

namespace hadamard {

/// Symmetric positive definite matrices of a fixed order under the
/// affine-invariant metric. Distances live on the log-eigenvalue scale:
///
///   d(A, B) = || log(A^{-1/2} B A^{-1/2}) ||_F
///
/// and geodesics interpolate matrix powers,
///
///   g(t) = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}.
///
/// All matrix functions go through dense symmetric eigendecompositions with
/// eigenvalues floored at the space tolerance; intended for small orders.
class SpdSpace {
  public:
    using Point = Eigen::MatrixXd;

    explicit SpdSpace(std::size_t order, double tolerance = kDefaultTolerance)
        : order_(order), tol_(checked_tolerance(tolerance)) {
        if (order_ < 1) throw std::invalid_argument("matrix order must be >= 1");
    }

    std::size_t order() const { return order_; }
    double tolerance() const { return tol_; }

    void validate(const Point& a) const {
        if (a.rows() != static_cast<Eigen::Index>(order_) ||
            a.cols() != static_cast<Eigen::Index>(order_))
            throw std::invalid_argument("matrix is " + std::to_string(a.rows()) + "x" +
                                        std::to_string(a.cols()) + ", space expects order " +
                                        std::to_string(order_));
        if (!a.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
        const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw std::invalid_argument("matrix is not symmetric");
        // Shifted Cholesky: succeeds exactly when all eigenvalues clear the
        // tolerance floor, at a fraction of an eigensolve.
        const Eigen::MatrixXd shifted =
            a - tol_ * Eigen::MatrixXd::Identity(a.rows(), a.cols());
        if (Eigen::LLT<Eigen::MatrixXd>(shifted).info() != Eigen::Success)
            throw std::invalid_argument("matrix is not positive definite at tolerance " +
                                        std::to_string(tol_));
    }

    double distance(const Point& a, const Point& b) const {
        validate(a);
        validate(b);
        const Eigen::VectorXd lam = congruence_eigenvalues(a, b);
        double sq = 0.0;
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            const double l = std::log(std::max(lam[i], tol_));
            sq += l * l;
        }
        return std::sqrt(sq);
    }

    Point geodesic(const Point& a, const Point& b, double t) const {
        validate(a);
        validate(b);
        check_unit_interval(t);
        if (t == 0.0) return a;
        if (t == 1.0) return b;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_a(a);
        const Eigen::MatrixXd root = power_from(eig_a, 0.5);
        const Eigen::MatrixXd iroot = power_from(eig_a, -0.5);
        Eigen::MatrixXd mid = iroot * b * iroot;
        mid = 0.5 * (mid + mid.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_m(mid);
        Eigen::MatrixXd out = root * power_from(eig_m, t) * root;
        return 0.5 * (out + out.transpose());
    }

  private:
    // Eigenvalues of A^{-1/2} B A^{-1/2} (all positive for PD inputs).
    Eigen::VectorXd congruence_eigenvalues(const Point& a, const Point& b) const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_a(a);
        const Eigen::MatrixXd iroot = power_from(eig_a, -0.5);
        Eigen::MatrixXd mid = iroot * b * iroot;
        mid = 0.5 * (mid + mid.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_m(mid, Eigen::EigenvaluesOnly);
        return eig_m.eigenvalues();
    }

    Eigen::MatrixXd power_from(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig,
                               double exponent) const {
        Eigen::VectorXd powered = eig.eigenvalues();
        for (Eigen::Index i = 0; i < powered.size(); ++i)
            powered[i] = std::pow(std::max(powered[i], tol_), exponent);
        return eig.eigenvectors() * powered.asDiagonal() * eig.eigenvectors().transpose();
    }

    std::size_t order_;
    double tol_;
};

}  // namespace hadamard
