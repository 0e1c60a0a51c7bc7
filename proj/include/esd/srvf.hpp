#pragma once

#include "esd/curve.hpp"

#include <Eigen/Core>

namespace esd {

// Discretized square-root velocity function q(t_l) = beta'(t_l)/|beta'(t_l)|^{1/2}
// over a partition of [0,1]. Periodic when the source curve is closed, in
// which case the first and last samples coincide.
struct ShapeFunction {
    Eigen::MatrixXd values; // d x N, one sample per column
    PartitionSpec partition;
    bool periodic = false;

    int dim() const { return static_cast<int>(values.rows()); }
    int size() const { return static_cast<int>(values.cols()); }
};

// Velocity estimated with the three-point finite-difference formula exact
// for quadratics (one-sided at open endpoints, wrap-around when closed).
// Nodes with |beta'| below 1e-14 map to the zero vector.
ShapeFunction compute_srvf(const Curve& c);

// q shifted by t_m: sample index rotation over the first N-1 samples of a
// periodic shape function on a uniform partition; sample N repeats sample 1.
// m is 1-based, m = 1 is the zero shift.
ShapeFunction shift(const ShapeFunction& q, int m);

} // namespace esd
