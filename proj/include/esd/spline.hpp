#pragma once

#include <Eigen/Core>

namespace esd {

// Componentwise cubic spline through d-dimensional samples on a shared
// strictly increasing knot vector. Open splines use not-a-knot end
// conditions (the interpolating parabola for three knots, a straight
// line for two); periodic splines treat the samples as one full period,
// with the last sample identified with the first.
class VectorSpline {
public:
    // values is d x n, one column per knot.
    VectorSpline(Eigen::VectorXd knots, const Eigen::MatrixXd& values, bool periodic);

    int dim() const { return static_cast<int>(coef0_.rows()); }
    int num_knots() const { return static_cast<int>(knots_.size()); }
    bool periodic() const { return periodic_; }
    const Eigen::VectorXd& knots() const { return knots_; }

    // Evaluates all components at x. Periodic splines wrap x by the period;
    // open splines extrapolate with the boundary polynomial.
    Eigen::VectorXd operator()(double x) const;

    // Hot-path variant: reuses an interval hint between calls and writes
    // into a caller-provided buffer of size dim().
    void eval(double x, int& hint, double* out) const;

private:
    int find_interval(double x, int hint) const;

    Eigen::VectorXd knots_;
    bool periodic_ = false;
    bool uniform_ = false;
    double inv_h_ = 0.0; // valid when uniform_
    double period_ = 0.0;
    // Per-interval polynomial in xi = x - knot(i):
    //   f(xi) = c0 + c1*xi + c2*xi^2 + c3*xi^3, one row per component.
    Eigen::MatrixXd coef0_, coef1_, coef2_, coef3_;
};

} // namespace esd
