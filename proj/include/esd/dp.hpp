#pragma once

#include "esd/spline.hpp"
#include "esd/srvf.hpp"

#include <Eigen/Core>

#include <span>
#include <utility>
#include <vector>

namespace esd {

// Discretized monotone reparametrization of [0,1]: gamma[0] = 0,
// gamma[N-1] = 1, strictly increasing. derivative[l] is the forward
// difference slope (gamma[l+1]-gamma[l])/h_l, with the last entry
// repeating the first.
struct Diffeomorphism {
    Eigen::VectorXd gamma;
    Eigen::VectorXd derivative;

    int size() const { return static_cast<int>(gamma.size()); }

    // Builds the derivative field and checks the invariants.
    static Diffeomorphism from_gamma(Eigen::VectorXd gamma, const Eigen::VectorXd& partition);
};

struct DpConfig {
    int layrs = 5;  // trailing-neighborhood side length
    int lstrp = 30; // strip half-width in bins
};

// Sparse set of grid points (i,j) over an N x M grid, 0-based, always
// containing the corners (0,0) and (N-1,M-1); all other members must be
// interior. Stores the energy table E and backtracking pointers P filled
// in by procedure_dp.
class GridPointSet {
public:
    GridPointSet(int rows, int cols, std::vector<std::pair<int, int>> points);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return cols_flat_.size(); }

    bool contains(int i, int j) const { return index_of(i, j) >= 0; }
    int index_of(int i, int j) const; // storage index, -1 when absent

    double energy(int i, int j) const;
    std::pair<int, int> pointer(int i, int j) const;
    bool has_pointer(int i, int j) const;

    void set_energy(int i, int j, double e);
    // Validates k < i and l < j.
    void set_pointer(int i, int j, int k, int l);

    const std::vector<int>& first_indices() const { return first_indices_; }
    const std::vector<int>& second_indices() const { return second_indices_; }

    // Row r (position into first_indices()): sorted j values and the
    // storage offset of the row.
    std::span<const int> row(int r) const;
    int row_offset(int r) const { return row_start_[r]; }

    // Storage-index access for the DP hot loop; idx comes from row_offset()
    // plus the position within a row.
    double energy_at(int idx) const { return energy_[idx]; }
    void set_energy_at(int idx, double e) { energy_[idx] = e; }
    std::pair<int, int> pointer_at(int idx) const { return pointer_[idx]; }
    void set_pointer_at(int idx, int k, int l) { pointer_[idx] = {k, l}; }
    int col_pos_at(int idx) const { return col_pos_flat_[idx]; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<int> first_indices_;  // sorted distinct i
    std::vector<int> second_indices_; // sorted distinct j
    std::vector<int> row_start_;      // size first_indices_.size()+1
    std::vector<int> cols_flat_;      // j per stored point, sorted within row
    std::vector<int> col_pos_flat_;   // position of j in second_indices_
    std::vector<double> energy_;
    std::vector<std::pair<int, int>> pointer_; // (-1,-1) when unset
};

// Trapezoidal energy of the single linear component from grid point (k,l)
// to (i,j): the integrand F_m = |q1(t_m) - sqrt(L) q2(alpha(t_m))|^2 is
// sampled at the ordered index_set (a subset of [k,i] containing both
// ends), alpha mapping [t_k,t_i] linearly onto [z_l,z_j] with slope L.
double segment_energy(int k, int l, int i, int j, const ShapeFunction& q1,
                      const VectorSpline& q2_spline, std::span<const int> index_set);

// Dynamic program over the grid point set: fills E and P by minimizing
// over the trailing neighborhood of the layrs largest first/second indices
// below each point. A point whose neighborhood is empty is unreachable
// (infinite energy): it still receives a pointer to the nearest
// predecessor so backtracking stays well defined, but it never wins a
// minimization, which keeps path slopes window-bounded. O(layrs^2 |R|)
// neighbor visits.
void procedure_dp(GridPointSet& r, const ShapeFunction& q1, const ShapeFunction& q2,
                  const DpConfig& cfg);

// Follows the pointers from (N-1,M-1) back to (0,0) and expands the chain
// into a diffeomorphism over the full first partition, linear between
// chain vertices.
Diffeomorphism backtrack_opt_diffeom(const GridPointSet& r, const Eigen::VectorXd& t,
                                     const Eigen::VectorXd& z);

// Multiresolution DP restricted to an adapting strip of Voronoi bins
// around the previous level's solution; O(N+M) total work. When
// final_energy is non-null it receives the DP energy at the far corner of
// the last level.
Diffeomorphism adapt_dp(const ShapeFunction& q1, const ShapeFunction& q2, const DpConfig& cfg,
                        double* final_energy = nullptr);

} // namespace esd
