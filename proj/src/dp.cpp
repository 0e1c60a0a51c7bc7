#include "esd/dp.hpp"

#include "esd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace esd {

Diffeomorphism Diffeomorphism::from_gamma(Eigen::VectorXd gamma,
                                          const Eigen::VectorXd& partition) {
    const int n = static_cast<int>(gamma.size());
    if (n < 2 || partition.size() != n) {
        throw MalformedInput("gamma and partition sizes must match (n >= 2)");
    }
    if (std::abs(gamma[0]) > 1e-12 || std::abs(gamma[n - 1] - 1.0) > 1e-12) {
        throw MalformedInput("gamma endpoints must be 0 and 1");
    }
    gamma[0] = 0.0;
    gamma[n - 1] = 1.0;
    for (int i = 0; i + 1 < n; ++i) {
        if (!(gamma[i] < gamma[i + 1])) {
            throw MalformedInput("gamma must be strictly increasing");
        }
    }
    Diffeomorphism d;
    d.gamma = std::move(gamma);
    d.derivative.resize(n);
    for (int i = 0; i + 1 < n; ++i) {
        d.derivative[i] = (d.gamma[i + 1] - d.gamma[i]) / (partition[i + 1] - partition[i]);
    }
    d.derivative[n - 1] = d.derivative[0];
    return d;
}

GridPointSet::GridPointSet(int rows, int cols, std::vector<std::pair<int, int>> points)
    : rows_(rows), cols_(cols) {
    if (rows_ < 2 || cols_ < 2) throw EmptyGrid("grid must be at least 2x2");
    points.push_back({0, 0});
    points.push_back({rows_ - 1, cols_ - 1});
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    for (const auto& [i, j] : points) {
        const bool corner = (i == 0 && j == 0) || (i == rows_ - 1 && j == cols_ - 1);
        const bool interior = i > 0 && i < rows_ - 1 && j > 0 && j < cols_ - 1;
        if (!corner && !interior) {
            throw MalformedInput("grid points must be interior or the two corners");
        }
    }

    first_indices_.reserve(64);
    row_start_.reserve(65);
    cols_flat_.resize(points.size());
    col_pos_flat_.resize(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (first_indices_.empty() || points[p].first != first_indices_.back()) {
            first_indices_.push_back(points[p].first);
            row_start_.push_back(static_cast<int>(p));
        }
        cols_flat_[p] = points[p].second;
    }
    row_start_.push_back(static_cast<int>(points.size()));

    second_indices_ = cols_flat_;
    std::sort(second_indices_.begin(), second_indices_.end());
    second_indices_.erase(std::unique(second_indices_.begin(), second_indices_.end()),
                          second_indices_.end());
    for (std::size_t p = 0; p < cols_flat_.size(); ++p) {
        col_pos_flat_[p] = static_cast<int>(
            std::lower_bound(second_indices_.begin(), second_indices_.end(), cols_flat_[p]) -
            second_indices_.begin());
    }

    energy_.assign(points.size(), std::numeric_limits<double>::quiet_NaN());
    pointer_.assign(points.size(), {-1, -1});
}

int GridPointSet::index_of(int i, int j) const {
    const auto row = std::lower_bound(first_indices_.begin(), first_indices_.end(), i);
    if (row == first_indices_.end() || *row != i) return -1;
    const int r = static_cast<int>(row - first_indices_.begin());
    const auto begin = cols_flat_.begin() + row_start_[r];
    const auto end = cols_flat_.begin() + row_start_[r + 1];
    const auto pos = std::lower_bound(begin, end, j);
    if (pos == end || *pos != j) return -1;
    return static_cast<int>(pos - cols_flat_.begin());
}

double GridPointSet::energy(int i, int j) const {
    const int idx = index_of(i, j);
    if (idx < 0) throw MalformedInput("grid point not present");
    return energy_[idx];
}

std::pair<int, int> GridPointSet::pointer(int i, int j) const {
    const int idx = index_of(i, j);
    if (idx < 0) throw MalformedInput("grid point not present");
    if (pointer_[idx].first < 0) throw BrokenPointerChain("pointer not set");
    return pointer_[idx];
}

bool GridPointSet::has_pointer(int i, int j) const {
    const int idx = index_of(i, j);
    return idx >= 0 && pointer_[idx].first >= 0;
}

void GridPointSet::set_energy(int i, int j, double e) {
    const int idx = index_of(i, j);
    if (idx < 0) throw MalformedInput("grid point not present");
    energy_[idx] = e;
}

void GridPointSet::set_pointer(int i, int j, int k, int l) {
    const int idx = index_of(i, j);
    if (idx < 0) throw MalformedInput("grid point not present");
    if (!(k < i && l < j)) throw MalformedInput("pointer must decrease both indices");
    pointer_[idx] = {k, l};
}

std::span<const int> GridPointSet::row(int r) const {
    return {cols_flat_.data() + row_start_[r],
            static_cast<std::size_t>(row_start_[r + 1] - row_start_[r])};
}

namespace {

// F_m for the linear map alpha of a segment: |q1(t_m) - sqrt(L) q2(alpha(t_m))|^2.
inline double segment_integrand(const Eigen::MatrixXd& q1v, const VectorSpline& q2s,
                                double alpha_t, double sqrt_slope, int m, int& hint,
                                double* buf) {
    q2s.eval(alpha_t, hint, buf);
    double s = 0.0;
    const int d = static_cast<int>(q1v.rows());
    for (int r = 0; r < d; ++r) {
        const double diff = q1v(r, m) - sqrt_slope * buf[r];
        s += diff * diff;
    }
    return s;
}

// Trapezoidal segment energy sampled at the sample indices idx[0..count-1]
// (ascending, idx[0] == k, idx[count-1] == i).
double segment_energy_over(const Eigen::MatrixXd& q1v, const Eigen::VectorXd& t,
                           const VectorSpline& q2s, const Eigen::VectorXd& z, int k, int l,
                           int i, int j, const int* idx, int count, double* buf) {
    const double tk = t[k];
    const double slope = (z[j] - z[l]) / (t[i] - tk);
    const double sqrt_slope = std::sqrt(slope);
    int hint = 0;
    double energy = 0.0;
    double prev_t = 0.0, prev_f = 0.0;
    for (int p = 0; p < count; ++p) {
        const int m = idx[p];
        const double a = z[l] + slope * (t[m] - tk);
        const double f = segment_integrand(q1v, q2s, a, sqrt_slope, m, hint, buf);
        if (p > 0) energy += (t[m] - prev_t) * (f + prev_f);
        prev_t = t[m];
        prev_f = f;
    }
    return 0.5 * energy;
}

void dp_run(GridPointSet& r, const Eigen::MatrixXd& q1v, const Eigen::VectorXd& t,
            const VectorSpline& q2s, int layrs) {
    const Eigen::VectorXd& z = q2s.knots();
    const std::vector<int>& rows = r.first_indices();
    const std::vector<int>& cols = r.second_indices();
    const int nrows = static_cast<int>(rows.size());

    std::vector<double> buf(q1v.rows());
    const double inf = std::numeric_limits<double>::infinity();

    for (int pi = 0; pi < nrows; ++pi) {
        const int i = rows[pi];
        const auto row_js = r.row(pi);
        const int offset = r.row_offset(pi);
        for (int e = 0; e < static_cast<int>(row_js.size()); ++e) {
            const int j = row_js[e];
            const int idx = offset + e;
            if (i == 0) { // corner (0,0)
                r.set_energy_at(idx, 0.0);
                continue;
            }
            const int pj = r.col_pos_at(idx);
            const int pk_lo = std::max(0, pi - layrs);
            const int pl_lo = std::max(0, pj - layrs);
            const int window_min_col = cols[pl_lo];

            double best = inf;
            int best_k = -1, best_l = -1;
            for (int pk = pk_lo; pk < pi; ++pk) {
                const int k = rows[pk];
                const auto krow = r.row(pk);
                const auto begin = krow.data();
                const auto end = begin + krow.size();
                for (const int* p = std::lower_bound(begin, end, window_min_col);
                     p != end && *p < j; ++p) {
                    const int l = *p;
                    const double cand =
                        r.energy_at(r.row_offset(pk) + static_cast<int>(p - begin)) +
                        segment_energy_over(q1v, t, q2s, z, k, l, i, j, rows.data() + pk,
                                            pi - pk + 1, buf.data());
                    if (cand < best) {
                        best = cand;
                        best_k = k;
                        best_l = l;
                    }
                }
            }

            if (best_k < 0) {
                // Empty trailing neighborhood: the point is unreachable and
                // never wins a minimization, but it still gets a pointer to
                // the nearest predecessor (largest k, then largest l) so a
                // backtrack passing through it stays well defined. Treating
                // such points as path candidates would admit arbitrarily
                // steep segments, which the window is there to rule out.
                for (int pk = pi - 1; pk >= 0 && best_k < 0; --pk) {
                    const auto krow = r.row(pk);
                    const auto begin = krow.data();
                    const auto pos = std::upper_bound(begin, begin + krow.size(), j - 1);
                    if (pos != begin) {
                        best_k = rows[pk];
                        best_l = *(pos - 1);
                        best = inf;
                    }
                }
            }

            r.set_energy_at(idx, best);
            r.set_pointer_at(idx, best_k, best_l);
        }
    }
}

} // namespace

double segment_energy(int k, int l, int i, int j, const ShapeFunction& q1,
                      const VectorSpline& q2_spline, std::span<const int> index_set) {
    if (!(k < i && l < j)) throw MalformedInput("segment requires k < i and l < j");
    if (index_set.size() < 2 || index_set.front() != k || index_set.back() != i) {
        throw MalformedInput("index set must run from k to i");
    }
    if (i >= q1.size() || j >= static_cast<int>(q2_spline.knots().size())) {
        throw MalformedInput("segment endpoint outside the grid");
    }
    std::vector<double> buf(q1.dim());
    return segment_energy_over(q1.values, q1.partition.values, q2_spline, q2_spline.knots(), k,
                               l, i, j, index_set.data(), static_cast<int>(index_set.size()),
                               buf.data());
}

void procedure_dp(GridPointSet& r, const ShapeFunction& q1, const ShapeFunction& q2,
                  const DpConfig& cfg) {
    if (r.size() < 2) throw EmptyGrid("grid point set has no content");
    if (r.rows() != q1.size() || r.cols() != q2.size()) {
        throw PartitionMismatch("grid does not match the shape function sizes");
    }
    if (cfg.layrs < 1 || cfg.lstrp < 1) throw MalformedInput("layrs and lstrp must be >= 1");
    VectorSpline q2s(q2.partition.values, q2.values, q2.periodic);
    dp_run(r, q1.values, q1.partition.values, q2s, cfg.layrs);
}

Diffeomorphism backtrack_opt_diffeom(const GridPointSet& r, const Eigen::VectorXd& t,
                                     const Eigen::VectorXd& z) {
    const int n = r.rows();
    if (t.size() != n || z.size() != r.cols()) {
        throw PartitionMismatch("partition sizes do not match the grid");
    }
    Eigen::VectorXd gamma(n);
    gamma[n - 1] = 1.0;
    int i = n - 1, j = r.cols() - 1;
    std::size_t steps = 0;
    while (!(i == 0 && j == 0)) {
        if (++steps > r.size()) throw BrokenPointerChain("pointer chain does not terminate");
        const auto [k, l] = r.pointer(i, j);
        gamma[k] = z[l];
        for (int m = k + 1; m < i; ++m) {
            gamma[m] = ((t[i] - t[m]) * z[l] + (t[m] - t[k]) * z[j]) / (t[i] - t[k]);
        }
        i = k;
        j = l;
    }
    return Diffeomorphism::from_gamma(std::move(gamma), t);
}

namespace {

// Sample indices of multiresolution level r: round(m (N-1) / 2^r), deduplicated.
std::vector<int> level_indices(int n, int level) {
    const long long denom = 1LL << level;
    const long long count = std::min<long long>(denom, n - 1);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count) + 1);
    for (long long m = 0; m <= denom; ++m) {
        const double x = static_cast<double>(m * (n - 1)) / static_cast<double>(denom);
        const int v = static_cast<int>(std::llround(x));
        if (out.empty() || v != out.back()) out.push_back(v);
    }
    return out;
}

// Voronoi-cell midpoints of the level's parameter values, with the first
// and last forced to the domain ends.
std::vector<double> level_midpoints(const Eigen::VectorXd& t, const std::vector<int>& idx) {
    const int ni = static_cast<int>(idx.size());
    std::vector<double> mid(ni - 1);
    for (int m = 0; m + 1 < ni; ++m) {
        mid[m] = 0.5 * (t[idx[m]] + t[idx[m + 1]]);
    }
    mid.front() = t[idx.front()];
    mid.back() = t[idx.back()];
    return mid;
}

int ceil_log2(int x) {
    int level = 0;
    while ((1LL << level) < x) ++level;
    return std::max(level, 1);
}

} // namespace

Diffeomorphism adapt_dp(const ShapeFunction& q1, const ShapeFunction& q2, const DpConfig& cfg,
                        double* final_energy) {
    const int n = q1.size();
    const int m = q2.size();
    if (n < 3 || m < 3) throw MalformedInput("adapt_dp needs at least 3 samples per curve");
    if (cfg.layrs < 1 || cfg.lstrp < 1) throw MalformedInput("layrs and lstrp must be >= 1");
    const Eigen::VectorXd& t = q1.partition.values;
    const Eigen::VectorXd& z = q2.partition.values;
    VectorSpline q2s(z, q2.values, q2.periodic);

    const int levels = std::max(ceil_log2(n - 1), ceil_log2(m - 1));
    std::vector<std::pair<int, int>> chain = {{n - 1, m - 1}, {0, 0}};

    std::vector<std::pair<int, int>> pts;
    std::unique_ptr<GridPointSet> grid;
    for (int level = 1; level <= levels; ++level) {
        const std::vector<int> idx_i = level_indices(n, level);
        const std::vector<int> idx_j = level_indices(m, level);
        const std::vector<double> mid_t = level_midpoints(t, idx_i);
        const std::vector<double> mid_z = level_midpoints(z, idx_j);
        const int nb = static_cast<int>(idx_i.size()) - 2; // interior bins per axis
        const int mb = static_cast<int>(idx_j.size()) - 2;

        // Per-column interval of bins touched by the previous solution.
        std::vector<int> c_lo(nb + 1, mb + 1), c_hi(nb + 1, 0);
        for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
            const auto [i1, j1] = chain[s];
            const auto [k1, l1] = chain[s + 1];
            const double x0 = t[k1], x1 = t[i1];
            const double y0 = z[l1], y1 = z[j1];
            const double slope = (y1 - y0) / (x1 - x0);

            int b_lo = static_cast<int>(
                std::lower_bound(mid_t.begin(), mid_t.end(), x0) - mid_t.begin());
            b_lo = std::clamp(b_lo, 1, nb);
            int b_hi = static_cast<int>(
                std::upper_bound(mid_t.begin(), mid_t.end(), x1) - mid_t.begin());
            b_hi = std::clamp(b_hi, 1, nb);
            for (int b = b_lo; b <= b_hi; ++b) {
                const double xa = std::max(x0, mid_t[b - 1]);
                const double xb = std::min(x1, mid_t[b]);
                const double ya = y0 + slope * (xa - x0);
                const double yb = y0 + slope * (xb - x0);
                int lo = static_cast<int>(
                    std::lower_bound(mid_z.begin(), mid_z.end(), ya) - mid_z.begin());
                lo = std::clamp(lo, 1, mb);
                int hi = static_cast<int>(
                    std::upper_bound(mid_z.begin(), mid_z.end(), yb) - mid_z.begin());
                hi = std::clamp(hi, 1, mb);
                c_lo[b] = std::min(c_lo[b], lo);
                c_hi[b] = std::max(c_hi[b], hi);
            }
        }

        pts.clear();
        for (int b = 1; b <= nb; ++b) {
            for (int c = c_lo[b]; c <= c_hi[b]; ++c) {
                for (int p = std::max(1, b - cfg.lstrp); p <= b; ++p) {
                    pts.push_back({idx_i[p], idx_j[c]});
                }
                for (int q = std::max(1, c - cfg.lstrp); q <= c; ++q) {
                    pts.push_back({idx_i[b], idx_j[q]});
                }
            }
        }

        grid = std::make_unique<GridPointSet>(n, m, std::move(pts));
        pts = {};
        dp_run(*grid, q1.values, t, q2s, cfg.layrs);

        chain.clear();
        int ci = n - 1, cj = m - 1;
        chain.push_back({ci, cj});
        while (!(ci == 0 && cj == 0)) {
            if (chain.size() > grid->size()) {
                throw BrokenPointerChain("pointer chain does not terminate");
            }
            const auto [k1, l1] = grid->pointer(ci, cj);
            chain.push_back({k1, l1});
            ci = k1;
            cj = l1;
        }
    }

    if (final_energy) *final_energy = grid->energy(n - 1, m - 1);
    return backtrack_opt_diffeom(*grid, t, z);
}

} // namespace esd
