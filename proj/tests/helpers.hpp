#pragma once

#include "esd/curve.hpp"
#include "esd/rotation.hpp"
#include "esd/srvf.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

namespace esd::testing {

inline constexpr double kPi = std::numbers::pi;

// Circular helix of radius 1 around +z, z(t) = t, sampled uniformly on
// [0, 2*pi*loops].
inline Curve helix_z(int loops, int samples) {
    Curve c;
    c.points.resize(3, samples);
    c.partition = Eigen::VectorXd::LinSpaced(samples, 0.0, 1.0);
    const double span = 2.0 * kPi * loops;
    for (int i = 0; i < samples; ++i) {
        const double t = span * i / (samples - 1);
        c.points.col(i) << std::cos(t), std::sin(t), t;
    }
    c.closed = false;
    return c;
}

// Same construction rotated so +x is the screw axis.
inline Curve helix_x(int loops, int samples) {
    Curve c;
    c.points.resize(3, samples);
    c.partition = Eigen::VectorXd::LinSpaced(samples, 0.0, 1.0);
    const double span = 2.0 * kPi * loops;
    for (int i = 0; i < samples; ++i) {
        const double t = span * i / (samples - 1);
        c.points.col(i) << t, std::cos(t), std::sin(t);
    }
    c.closed = false;
    return c;
}

// Spherical ellipsoid curve around +z: (a cos t, b sin t, sqrt(r^2-x^2-y^2)).
inline Curve ellipsoid_z(double r, double a, double b, const Eigen::VectorXd& t_values) {
    const int n = static_cast<int>(t_values.size());
    Curve c;
    c.points.resize(3, n);
    c.partition.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = t_values[i];
        const double x = a * std::cos(t);
        const double y = b * std::sin(t);
        c.points.col(i) << x, y, std::sqrt(r * r - x * x - y * y);
        c.partition[i] = (t - t_values[0]) / (t_values[n - 1] - t_values[0]);
    }
    c.points.col(n - 1) = c.points.col(0);
    c.closed = true;
    return c;
}

// Spherical ellipsoid around +x (coordinate roles cycled x->y->z->x).
inline Curve ellipsoid_x(double r, double a, double b, const Eigen::VectorXd& t_values) {
    const int n = static_cast<int>(t_values.size());
    Curve c;
    c.points.resize(3, n);
    c.partition.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = t_values[i];
        const double y = a * std::cos(t);
        const double z = b * std::sin(t);
        c.points.col(i) << std::sqrt(r * r - y * y - z * z), y, z;
        c.partition[i] = (t - t_values[0]) / (t_values[n - 1] - t_values[0]);
    }
    c.points.col(n - 1) = c.points.col(0);
    c.closed = true;
    return c;
}

inline Eigen::VectorXd uniform_angles(int n, double span = 2.0 * kPi) {
    return Eigen::VectorXd::LinSpaced(n, 0.0, span);
}

// Monotone but visibly nonuniform parameter values on [0, span].
inline Eigen::VectorXd wobbly_angles(int n, double span = 2.0 * kPi) {
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / (n - 1);
        t[i] = span * (u + 0.08 * u * (1.0 - u) * std::sin(6.0 * kPi * u));
    }
    t[0] = 0.0;
    t[n - 1] = span;
    return t;
}

// Smooth random closed curve from a short trigonometric series.
inline Curve random_closed_curve(std::mt19937& rng, int dim, int samples, int harmonics = 3) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd ca(dim, harmonics), cb(dim, harmonics);
    for (int k = 0; k < dim; ++k) {
        for (int h = 0; h < harmonics; ++h) {
            const double decay = 1.0 / (1.0 + h * h);
            ca(k, h) = gauss(rng) * decay;
            cb(k, h) = gauss(rng) * decay;
        }
    }
    Curve c;
    c.points.resize(dim, samples);
    c.partition = Eigen::VectorXd::LinSpaced(samples, 0.0, 1.0);
    for (int i = 0; i < samples; ++i) {
        const double u = 2.0 * kPi * i / (samples - 1);
        for (int k = 0; k < dim; ++k) {
            double v = 0.0;
            for (int h = 0; h < harmonics; ++h) {
                v += ca(k, h) * std::cos((h + 1) * u) + cb(k, h) * std::sin((h + 1) * u);
            }
            c.points(k, i) = v;
        }
    }
    c.points.col(samples - 1) = c.points.col(0);
    c.closed = true;
    return c;
}

// Smooth random open curve.
inline Curve random_open_curve(std::mt19937& rng, int dim, int samples) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Curve c;
    c.points.resize(dim, samples);
    c.partition = Eigen::VectorXd::LinSpaced(samples, 0.0, 1.0);
    Eigen::VectorXd drift(dim), a1(dim), a2(dim), p1(dim), p2(dim);
    for (int k = 0; k < dim; ++k) {
        drift[k] = gauss(rng);
        a1[k] = 0.5 * gauss(rng);
        a2[k] = 0.25 * gauss(rng);
        p1[k] = gauss(rng);
        p2[k] = gauss(rng);
    }
    for (int i = 0; i < samples; ++i) {
        const double u = static_cast<double>(i) / (samples - 1);
        for (int k = 0; k < dim; ++k) {
            c.points(k, i) = drift[k] * u + a1[k] * std::sin(2.0 * kPi * u + p1[k]) +
                             a2[k] * std::sin(4.0 * kPi * u + p2[k]);
        }
    }
    c.closed = false;
    return c;
}

// Periodic shape function with random smooth values on a uniform partition.
inline ShapeFunction random_periodic_shape(std::mt19937& rng, int dim, int samples,
                                           int harmonics = 4) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ShapeFunction q;
    q.values.resize(dim, samples);
    q.partition.values = Eigen::VectorXd::LinSpaced(samples, 0.0, 1.0);
    q.partition.uniform = true;
    q.periodic = true;
    for (int k = 0; k < dim; ++k) {
        for (int i = 0; i < samples - 1; ++i) q.values(k, i) = 0.0;
        for (int h = 0; h <= harmonics; ++h) {
            const double a = gauss(rng) / (1.0 + h);
            const double b = gauss(rng) / (1.0 + h);
            for (int i = 0; i < samples - 1; ++i) {
                const double u = 2.0 * kPi * h * i / (samples - 1);
                q.values(k, i) += a * std::cos(u) + b * std::sin(u);
            }
        }
    }
    q.values.col(samples - 1) = q.values.col(0);
    return q;
}

// Arbitrary (not smooth) shape function values; open, possibly nonuniform.
inline ShapeFunction random_shape(std::mt19937& rng, int dim, int samples) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ShapeFunction q;
    q.values.resize(dim, samples);
    for (int k = 0; k < dim; ++k) {
        for (int i = 0; i < samples; ++i) q.values(k, i) = gauss(rng);
    }
    q.partition.values = Eigen::VectorXd::LinSpaced(samples, 0.0, 1.0);
    q.partition.uniform = true;
    q.periodic = false;
    return q;
}

// Haar-ish random rotation: QR of a Gaussian matrix with the determinant
// fixed to +1.
inline Eigen::MatrixXd random_rotation(std::mt19937& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = gauss(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    if (q.determinant() < 0) q.col(0) = -q.col(0);
    return q;
}

} // namespace esd::testing
