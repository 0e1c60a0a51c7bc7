#pragma once

#include "esd/srvf.hpp"

#include <Eigen/Core>

#include <span>
#include <utility>

namespace esd {

// d x d orthogonal matrix with determinant +1.
class Rotation {
public:
    Rotation() : matrix_(Eigen::MatrixXd::Identity(1, 1)) {}

    // Validates orthogonality and determinant; throws on gross violation.
    static Rotation from_matrix(Eigen::MatrixXd m);

    static Rotation identity(int d) { return Rotation(Eigen::MatrixXd::Identity(d, d)); }

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }

private:
    explicit Rotation(Eigen::MatrixXd m) : matrix_(std::move(m)) {}
    friend std::pair<Rotation, double> ku_rotation(const struct CrossMatrix& a);

    Eigen::MatrixXd matrix_;
};

// Weighted correlation matrix A_kj = sum_l w_l * q1_k(t_l) * q2_j(t_l).
struct CrossMatrix {
    Eigen::MatrixXd entries;

    int dim() const { return static_cast<int>(entries.rows()); }
};

struct RigidMotion {
    Rotation rotation;
    Eigen::VectorXd translation;
};

// Cross matrix of two shape functions over their shared partition, using
// trapezoidal weights. Throws PartitionMismatch when sizes or partitions
// differ.
CrossMatrix cross_matrix(const ShapeFunction& q1, const ShapeFunction& q2);

// Cross matrix of two weighted point lists (columns of x and y).
CrossMatrix cross_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                         const Eigen::VectorXd& weights);

// Rotation R maximizing tr(R A^T) over all rotations, built from the SVD
// A = U S V^T as R = U diag(1,...,1,sign(det(UV))) V^T. Returns R together
// with maxtrace = tr(R A^T). For d == 1 the rotation is always [1].
std::pair<Rotation, double> ku_rotation(const CrossMatrix& a);

// Weighted orientation-preserving rigid-motion fit y -> x: rotation from
// the centered cross matrix, translation matching the weighted centroids.
// Returns the motion and the residual sum_l w_l |x_l - (R y_l + t)|^2.
std::pair<RigidMotion, double> fit_rigid_motion(const Eigen::MatrixXd& x,
                                                const Eigen::MatrixXd& y,
                                                const Eigen::VectorXd& weights);

} // namespace esd
