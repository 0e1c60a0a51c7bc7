#pragma once

#include "esd/curve.hpp"
#include "esd/dp.hpp"
#include "esd/rotation.hpp"
#include "esd/srvf.hpp"

#include <Eigen/Core>

#include <vector>

namespace esd {

// Result of the elastic registration of two curves. Curve 1 is the curve
// that owns the starting-point set (the closed one when exactly one curve
// is closed); curves_swapped records when that is the second input.
struct RegistrationResult {
    double t0 = 0.0;
    Rotation rotation;
    Diffeomorphism gamma;
    // L2 mismatch norm at the optimum: the square root of the discretized
    // mismatch energy of the registered shape functions.
    double distance = 0.0;
    Eigen::MatrixXd registered_curve1; // rotated/shifted curve-1 samples
    Eigen::MatrixXd registered_curve2; // reparametrized curve-2 samples
    Eigen::MatrixXd registered_srvf1;
    Eigen::MatrixXd registered_srvf2;
    Eigen::VectorXd partition; // parameter grid the registration lives on
    bool direction_reversed = false;
    bool curves_swapped = false;
    int iterations = 0;
};

struct PipelineConfig {
    int itop = 1;
    int iten = 10;
    double tol = 1e-6;
    double e_init = 1e6;
    DpConfig dp;
    bool use_fft = false;
    bool try_both_directions = false;
    bool use_procedure1 = false; // cross-validation path; procedure 2/3 otherwise
    int stride = 1;              // starting-point subsampling
};

// Candidate starting parameters: {0} when neither curve is closed, else
// the first N-1 nodes of the uniform common partition (stride-subsampled).
std::vector<double> starting_point_set(const Curve& c1, const Curve& c2,
                                       const PartitionSpec& p, int stride = 1);

// Mismatch energy sum_l h'_l |R q1(t0+t_l) - sqrt(gamma'_l) q2(gamma_l)|^2
// with q2 evaluated by cubic spline. t0 must be a partition node; nonzero
// t0 requires a periodic q1.
double evaluate_energy(double t0, const Rotation& rotation, const Diffeomorphism& g,
                       const ShapeFunction& q1, const ShapeFunction& q2);

// One KU -> DP -> KU sweep per starting point, reparametrizing and
// rotating the first curve; keeps the best triple.
RegistrationResult procedure1(const std::vector<double>& k, const ShapeFunction& q1,
                              const ShapeFunction& q2, const Curve& b1, const Curve& b2,
                              const PipelineConfig& cfg);

// Scalar open-curve case: a single DP run on possibly different
// partitions, no rotation or starting-point search.
RegistrationResult procedure1_prime(const ShapeFunction& q1, const ShapeFunction& q2,
                                    const Curve& b1, const Curve& b2,
                                    const PipelineConfig& cfg);

// Alternating minimization: per iteration one KU pass over all starting
// points (keeping the itop best couples by maxtrace) followed by one DP
// pass per retained couple, reparametrizing the second curve.
RegistrationResult procedure2(const std::vector<double>& k, const ShapeFunction& q1,
                              const ShapeFunction& q2, const Curve& b1, const Curve& b2,
                              const PipelineConfig& cfg);

// procedure2 with the per-starting-point KU pass replaced by one FFT-based
// all-shifts pass; requires two closed curves on a uniform partition.
RegistrationResult procedure3(const std::vector<double>& k, const ShapeFunction& q1,
                              const ShapeFunction& q2, const Curve& b1, const Curve& b2,
                              const PipelineConfig& cfg);

// Full pipeline: normalize, build the common partition, resample, compute
// SRVFs, dispatch to the applicable procedure, and optionally repeat with
// the second curve reversed, returning the smaller distance.
RegistrationResult compute_esd(const Curve& c1, const Curve& c2, const PipelineConfig& cfg = {});

} // namespace esd
