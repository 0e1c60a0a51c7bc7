#include "esd/rotation.hpp"

#include "esd/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace esd {

Rotation Rotation::from_matrix(Eigen::MatrixXd m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw MalformedInput("rotation matrix must be square");
    }
    const int d = static_cast<int>(m.rows());
    const double ortho =
        (m.transpose() * m - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    const double det = m.determinant();
    if (ortho > 1e-10 || std::abs(det - 1.0) > 1e-10) {
        throw MalformedInput("matrix is not a rotation (orthogonality/determinant violated)");
    }
    return Rotation(std::move(m));
}

CrossMatrix cross_matrix(const ShapeFunction& q1, const ShapeFunction& q2) {
    if (q1.size() != q2.size() || q1.dim() != q2.dim()) {
        throw PartitionMismatch("shape functions differ in size or dimension");
    }
    const Eigen::VectorXd& t1 = q1.partition.values;
    const Eigen::VectorXd& t2 = q2.partition.values;
    if ((t1 - t2).cwiseAbs().maxCoeff() > 1e-12) {
        throw PartitionMismatch("shape functions have different partitions");
    }
    return cross_matrix(q1.values, q2.values, trapezoid_weights(t1));
}

CrossMatrix cross_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                         const Eigen::VectorXd& weights) {
    if (x.cols() != y.cols() || x.rows() != y.rows() || weights.size() != x.cols()) {
        throw PartitionMismatch("point lists and weights differ in size");
    }
    CrossMatrix a;
    a.entries = x * weights.asDiagonal() * y.transpose();
    return a;
}

std::pair<Rotation, double> ku_rotation(const CrossMatrix& a) {
    const Eigen::MatrixXd& m = a.entries;
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw MalformedInput("cross matrix must be square");
    }
    if (!m.allFinite()) throw SvdFailure("cross matrix has non-finite entries");
    const int d = a.dim();
    if (d == 1) {
        return {Rotation(Eigen::MatrixXd::Identity(1, 1)), m(0, 0)};
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd& u = svd.matrixU();
    const Eigen::MatrixXd& v = svd.matrixV();
    const Eigen::VectorXd& sigma = svd.singularValues();

    const double norm = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    const Eigen::MatrixXd recon = u * sigma.asDiagonal() * v.transpose();
    if (!recon.allFinite() || (recon - m).cwiseAbs().maxCoeff() > 1e-12 * std::max(norm, 1.0)) {
        throw SvdFailure("singular value decomposition did not reproduce the input");
    }

    Eigen::VectorXd s = Eigen::VectorXd::Ones(d);
    if (u.determinant() * v.determinant() < 0.0) s[d - 1] = -1.0;
    Eigen::MatrixXd r = u * s.asDiagonal() * v.transpose();
    const double maxtrace = (r * m.transpose()).trace();
    return {Rotation(std::move(r)), maxtrace};
}

std::pair<RigidMotion, double> fit_rigid_motion(const Eigen::MatrixXd& x,
                                                const Eigen::MatrixXd& y,
                                                const Eigen::VectorXd& weights) {
    const int n = static_cast<int>(x.cols());
    if (y.cols() != n || x.rows() != y.rows()) {
        throw LengthMismatch("point lists differ in size");
    }
    if (weights.size() != n) throw LengthMismatch("weights size mismatch");
    if ((weights.array() <= 0.0).any()) {
        throw NonPositiveWeights("all weights must be positive");
    }
    const double wsum = weights.sum();

    const Eigen::VectorXd cx = x * weights / wsum;
    const Eigen::VectorXd cy = y * weights / wsum;
    const Eigen::MatrixXd px = x.colwise() - cx;
    const Eigen::MatrixXd py = y.colwise() - cy;

    auto [rot, maxtrace] = ku_rotation(cross_matrix(px, py, weights));
    (void)maxtrace;
    Eigen::VectorXd t = cx - rot.matrix() * cy;

    double residual = 0.0;
    for (int l = 0; l < n; ++l) {
        residual += weights[l] * (x.col(l) - (rot.matrix() * y.col(l) + t)).squaredNorm();
    }
    RigidMotion motion{rot, std::move(t)};
    return {std::move(motion), residual};
}

} // namespace esd
