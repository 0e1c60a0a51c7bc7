#pragma once

#include "esd/rotation.hpp"
#include "esd/srvf.hpp"

#include <vector>

namespace esd {

// Candidate alignment of a circular shift m (1-based, m = 1 is the zero
// shift) with its optimal rotation and trace value.
struct ShiftRotationCandidate {
    int m = 1;
    Rotation rotation;
    double maxtrace = 0.0;
};

// Cross matrices A(m), m = 1..N-1, between q1 and every circular shift of
// q2: A(m)_{kj} = sum_{l=1}^{N-1} q1_k(t_l) q2_j(t_m + t_l). All d^2 entry
// sequences are computed at once through the DFT convolution identity, in
// O(d^2 N log N). Requires two periodic shape functions on the same
// uniform partition.
std::vector<CrossMatrix> circular_cross_matrices(const ShapeFunction& q1,
                                                 const ShapeFunction& q2);

// Runs the Kabsch-Umeyama SVD branch on A(m) for every admissible shift m
// and keeps the itop couples with the largest maxtrace (ties to smaller m),
// sorted descending. A(m) is scaled by the uniform trapezoid weight
// h = 1/(N-1) first, so maxtrace values line up with ku_rotation applied
// to explicitly shifted inputs. admissible is a sorted list of 1-based
// shift indices; empty means all shifts.
std::vector<ShiftRotationCandidate> ku2(const ShapeFunction& q1, const ShapeFunction& q2,
                                        const std::vector<int>& admissible, int itop);

} // namespace esd
