#include "esd/srvf.hpp"

#include "esd/errors.hpp"

#include <cmath>

namespace esd {

namespace {

constexpr double kZeroVelocity = 1e-14;

// d/dt at the middle node of three samples, exact for quadratics.
// a = t0 - tminus, b = tplus - t0.
Eigen::VectorXd central(const Eigen::VectorXd& fm, const Eigen::VectorXd& f0,
                        const Eigen::VectorXd& fp, double a, double b) {
    return (-b / (a * (a + b))) * fm + ((b - a) / (a * b)) * f0 + (a / (b * (a + b))) * fp;
}

Eigen::VectorXd to_srvf(const Eigen::VectorXd& velocity) {
    const double speed = velocity.norm();
    if (speed < kZeroVelocity) return Eigen::VectorXd::Zero(velocity.size());
    return velocity / std::sqrt(speed);
}

} // namespace

ShapeFunction compute_srvf(const Curve& c) {
    c.validate();
    const int n = c.size();
    const Eigen::MatrixXd& pts = c.points;
    const Eigen::VectorXd& t = c.partition;

    ShapeFunction q;
    q.values.resize(c.dim(), n);
    q.partition.values = t;
    q.partition.uniform = false;
    {
        const double mean_h = (t[n - 1] - t[0]) / (n - 1);
        double dev = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            dev = std::max(dev, std::abs((t[i + 1] - t[i]) - mean_h));
        }
        q.partition.uniform = dev <= 1e-12;
    }
    q.periodic = c.closed;

    for (int i = 1; i + 1 < n; ++i) {
        q.values.col(i) = to_srvf(
            central(pts.col(i - 1), pts.col(i), pts.col(i + 1), t[i] - t[i - 1], t[i + 1] - t[i]));
    }

    if (c.closed) {
        // Wrap around the seam; both seam samples get the same value.
        const double a = t[n - 1] - t[n - 2];
        const double b = t[1] - t[0];
        q.values.col(0) = to_srvf(central(pts.col(n - 2), pts.col(0), pts.col(1), a, b));
        q.values.col(n - 1) = q.values.col(0);
    } else {
        // Second-order one-sided formulas at the ends.
        {
            const double a = t[1] - t[0];
            const double b = t[2] - t[1];
            Eigen::VectorXd v = (-(2.0 * a + b) / (a * (a + b))) * pts.col(0) +
                                ((a + b) / (a * b)) * pts.col(1) -
                                (a / (b * (a + b))) * pts.col(2);
            q.values.col(0) = to_srvf(v);
        }
        {
            const double a = t[n - 2] - t[n - 3];
            const double b = t[n - 1] - t[n - 2];
            Eigen::VectorXd v = (b / (a * (a + b))) * pts.col(n - 3) -
                                ((a + b) / (a * b)) * pts.col(n - 2) +
                                ((a + 2.0 * b) / (b * (a + b))) * pts.col(n - 1);
            q.values.col(n - 1) = to_srvf(v);
        }
    }
    return q;
}

ShapeFunction shift(const ShapeFunction& q, int m) {
    if (!q.periodic) throw NotPeriodic("shift requires a periodic shape function");
    if (!q.partition.uniform) throw NonUniformPartition("shift requires a uniform partition");
    const int n = q.size();
    if (m < 1 || m > n - 1) {
        throw MalformedInput("shift index out of range: " + std::to_string(m));
    }
    ShapeFunction out;
    out.partition = q.partition;
    out.periodic = true;
    out.values.resize(q.dim(), n);
    const int cycle = n - 1;
    for (int l = 0; l < cycle; ++l) {
        out.values.col(l) = q.values.col((l + m - 1) % cycle);
    }
    out.values.col(n - 1) = out.values.col(0);
    return out;
}

} // namespace esd
