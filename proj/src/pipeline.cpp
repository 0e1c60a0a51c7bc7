#include "esd/pipeline.hpp"

#include "esd/errors.hpp"
#include "esd/fft_rotation.hpp"
#include "esd/spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace esd {

namespace {

// 0-based index of the partition node equal to t0.
int node_index(const Eigen::VectorXd& t, double t0) {
    const int n = static_cast<int>(t.size());
    const double* begin = t.data();
    int i = static_cast<int>(std::lower_bound(begin, begin + n, t0) - begin);
    if (i > 0 && (i == n || std::abs(t[i - 1] - t0) < std::abs(t[i] - t0))) --i;
    if (i >= n || std::abs(t[i] - t0) > 1e-9) {
        throw MalformedInput("starting point is not a partition node");
    }
    return i;
}

// Column of the circularly shifted sample matrix: the first N-1 columns
// rotate, the last repeats the first. A zero shift is the identity even
// for open curves.
inline int shifted_column(int l, int s, int n) {
    if (s == 0) return l;
    const int cycle = n - 1;
    if (l == cycle) l = 0;
    return (l + s) % cycle;
}

Eigen::MatrixXd shifted_values(const Eigen::MatrixXd& v, int s) {
    const int n = static_cast<int>(v.cols());
    if (s == 0) return v;
    Eigen::MatrixXd out(v.rows(), n);
    for (int l = 0; l < n; ++l) out.col(l) = v.col(shifted_column(l, s, n));
    return out;
}

// Cross matrix of x against the s-shifted y without materializing the shift.
CrossMatrix shifted_cross(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          const Eigen::VectorXd& w, int s) {
    const int n = static_cast<int>(x.cols());
    CrossMatrix a;
    a.entries = Eigen::MatrixXd::Zero(x.rows(), y.rows());
    for (int l = 0; l < n; ++l) {
        a.entries.noalias() += w[l] * x.col(l) * y.col(shifted_column(l, s, n)).transpose();
    }
    return a;
}

double weighted_mismatch(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                         const Eigen::VectorXd& w) {
    double e = 0.0;
    for (int l = 0; l < a.cols(); ++l) {
        e += w[l] * (a.col(l) - b.col(l)).squaredNorm();
    }
    return e;
}

// hat q2(t_l) = sqrt(gamma'_l) q2(gamma_l), evaluated through the spline.
Eigen::MatrixXd reparametrize(const VectorSpline& q2s, const Diffeomorphism& g) {
    const int n = g.size();
    Eigen::MatrixXd out(q2s.dim(), n);
    int hint = 0;
    for (int l = 0; l < n; ++l) {
        q2s.eval(g.gamma[l], hint, out.col(l).data());
        out.col(l) *= std::sqrt(g.derivative[l]);
    }
    return out;
}

ShapeFunction wrap_values(Eigen::MatrixXd values, const PartitionSpec& p, bool periodic) {
    ShapeFunction q;
    q.values = std::move(values);
    q.partition = p;
    q.periodic = periodic;
    return q;
}

struct Candidate {
    int shift = 0; // 0-based node index
    Rotation rotation;
    double maxtrace = 0.0;
};

void keep_top(std::vector<Candidate>& cands, int itop) {
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.maxtrace != b.maxtrace) return a.maxtrace > b.maxtrace;
        return a.shift < b.shift;
    });
    if (static_cast<int>(cands.size()) > itop) cands.resize(itop);
}

std::vector<int> node_indices(const Eigen::VectorXd& t, const std::vector<double>& k) {
    std::vector<int> shifts;
    shifts.reserve(k.size());
    for (double t0 : k) shifts.push_back(node_index(t, t0));
    return shifts;
}

// Shared body of procedures 2 and 3; use_fft selects the pass-1 engine.
RegistrationResult run_alternating(const std::vector<double>& k, const ShapeFunction& q1,
                                   const ShapeFunction& q2, const Curve& b1, const Curve& b2,
                                   const PipelineConfig& cfg, bool use_fft) {
    const int n = q1.size();
    if (q2.size() != n || q1.dim() != q2.dim()) {
        throw PartitionMismatch("shape functions differ in size or dimension");
    }
    if (k.empty()) throw MalformedInput("empty starting point set");
    if (cfg.itop < 1 || cfg.itop > static_cast<int>(k.size())) {
        throw ItopTooLarge("itop must be between 1 and |K|");
    }
    const Eigen::VectorXd& t = q1.partition.values;
    const std::vector<int> shifts = node_indices(t, k);
    if (k.size() > 1) {
        if (!q1.partition.uniform) {
            throw NonUniformPartition("multiple starting points need a uniform partition");
        }
        if (!q1.periodic) throw NotPeriodic("multiple starting points need a closed curve 1");
    }
    if (use_fft && !(q1.periodic && q2.periodic)) {
        throw NotClosed("the FFT pass requires two closed curves");
    }

    const Eigen::VectorXd w = trapezoid_weights(t);
    const VectorSpline q2s(t, q2.values, q2.periodic);

    Eigen::MatrixXd hat_q2 = q2.values;

    struct BestRecord {
        double energy = std::numeric_limits<double>::infinity();
        int shift = 0;
        Rotation rotation;
        Diffeomorphism gamma;
        Eigen::MatrixXd hat_q1, hat_q2;
    } best;

    std::vector<int> admissible;
    if (use_fft) {
        admissible.reserve(shifts.size());
        for (int s : shifts) admissible.push_back(s + 1);
    }

    double e_curr = cfg.e_init;
    int iter = 0;
    while (true) {
        ++iter;
        const double e_prev = e_curr;

        std::vector<Candidate> cands;
        if (use_fft) {
            const ShapeFunction hat_q2_sf = wrap_values(hat_q2, q1.partition, true);
            for (auto& c : ku2(hat_q2_sf, q1, admissible, cfg.itop)) {
                cands.push_back({c.m - 1, std::move(c.rotation), c.maxtrace});
            }
        } else {
            cands.reserve(shifts.size());
            for (int s : shifts) {
                auto [rot, maxtrace] = ku_rotation(shifted_cross(hat_q2, q1.values, w, s));
                cands.push_back({s, std::move(rot), maxtrace});
            }
            keep_top(cands, cfg.itop);
        }

        double iter_best = std::numeric_limits<double>::infinity();
        for (const Candidate& cand : cands) {
            Eigen::MatrixXd hat_q1 = cand.rotation.matrix() * shifted_values(q1.values, cand.shift);
            const ShapeFunction hat_q1_sf = wrap_values(hat_q1, q1.partition, q1.periodic);
            Diffeomorphism gamma = adapt_dp(hat_q1_sf, q2, cfg.dp);
            Eigen::MatrixXd hat_q2_cand = reparametrize(q2s, gamma);
            const double e = weighted_mismatch(hat_q1, hat_q2_cand, w);
            iter_best = std::min(iter_best, e);
            if (e < best.energy) {
                best = {e, cand.shift, cand.rotation, std::move(gamma), std::move(hat_q1),
                        std::move(hat_q2_cand)};
            }
        }
        e_curr = iter_best;
        hat_q2 = best.hat_q2;

        if (std::abs(e_curr - e_prev) < cfg.tol || iter > cfg.iten) break;
    }

    RegistrationResult res;
    res.t0 = t[best.shift];
    res.rotation = best.rotation;
    res.distance = std::sqrt(best.energy); // L2 mismatch norm
    res.registered_srvf1 = std::move(best.hat_q1);
    res.registered_srvf2 = std::move(best.hat_q2);
    res.partition = t;
    res.iterations = iter;

    const VectorSpline b2s(t, b2.points, b2.closed);
    res.registered_curve2.resize(b2.dim(), n);
    int hint = 0;
    for (int l = 0; l < n; ++l) {
        b2s.eval(best.gamma.gamma[l], hint, res.registered_curve2.col(l).data());
    }
    res.registered_curve1 = best.rotation.matrix() * shifted_values(b1.points, best.shift);
    res.gamma = std::move(best.gamma);
    return res;
}

} // namespace

std::vector<double> starting_point_set(const Curve& c1, const Curve& c2,
                                       const PartitionSpec& p, int stride) {
    if (stride < 1) throw MalformedInput("stride must be >= 1");
    if (!c1.closed && !c2.closed) return {0.0};
    if (!p.uniform) {
        throw NonUniformPartition("closed curves need a uniform common partition");
    }
    std::vector<double> k;
    const int n = p.size();
    k.reserve((n - 1 + stride - 1) / stride);
    for (int i = 0; i < n - 1; i += stride) k.push_back(p.values[i]);
    return k;
}

double evaluate_energy(double t0, const Rotation& rotation, const Diffeomorphism& g,
                       const ShapeFunction& q1, const ShapeFunction& q2) {
    const int n = q1.size();
    if (q2.size() != n || g.size() != n) {
        throw PartitionMismatch("energy arguments differ in size");
    }
    const Eigen::VectorXd& t = q1.partition.values;
    const int s = node_index(t, t0);
    if (s != 0) {
        if (!q1.periodic) throw NotPeriodic("nonzero t0 requires a periodic curve 1");
        if (!q1.partition.uniform) {
            throw NonUniformPartition("nonzero t0 requires a uniform partition");
        }
    }
    const Eigen::VectorXd w = trapezoid_weights(t);
    const VectorSpline q2s(q2.partition.values, q2.values, q2.periodic);

    double e = 0.0;
    Eigen::VectorXd buf(q2.dim());
    int hint = 0;
    for (int l = 0; l < n; ++l) {
        q2s.eval(g.gamma[l], hint, buf.data());
        buf *= std::sqrt(g.derivative[l]);
        e += w[l] *
             (rotation.matrix() * q1.values.col(shifted_column(l, s, n)) - buf).squaredNorm();
    }
    return e;
}

RegistrationResult procedure1(const std::vector<double>& k, const ShapeFunction& q1,
                              const ShapeFunction& q2, const Curve& b1, const Curve& b2,
                              const PipelineConfig& cfg) {
    const int n = q1.size();
    if (q2.size() != n || q1.dim() != q2.dim()) {
        throw PartitionMismatch("shape functions differ in size or dimension");
    }
    if (k.empty()) throw MalformedInput("empty starting point set");
    const int d = q1.dim();
    const Eigen::VectorXd& t = q1.partition.values;
    const Eigen::VectorXd w = trapezoid_weights(t);
    const std::vector<int> shifts = node_indices(t, k);
    if (k.size() > 1 && !(q1.periodic && q1.partition.uniform)) {
        throw NotPeriodic("multiple starting points need a closed curve 1 on a uniform grid");
    }

    const VectorSpline q1s(t, q1.values, q1.periodic);
    const VectorSpline b1s(t, b1.points, b1.closed);

    struct BestRecord {
        double energy = std::numeric_limits<double>::infinity();
        int shift = 0;
        Rotation rotation;
        Diffeomorphism gamma;
        Eigen::MatrixXd hat_q1;
    } best;

    for (int s : shifts) {
        Eigen::MatrixXd hat_q1 = shifted_values(q1.values, s);
        Rotation rot = Rotation::identity(d);
        if (d != 1) {
            rot = ku_rotation(cross_matrix(q2.values, hat_q1, w)).first;
        }
        Eigen::MatrixXd bar_q1 = rot.matrix() * hat_q1;
        const ShapeFunction bar_q1_sf = wrap_values(std::move(bar_q1), q1.partition, q1.periodic);
        Diffeomorphism gamma = adapt_dp(q2, bar_q1_sf, cfg.dp);

        // Reparametrize the (unrotated) shifted curve 1 and re-solve the
        // rotation against it.
        const double t0 = t[s];
        Eigen::MatrixXd warped(d, n);
        int hint = 0;
        for (int l = 0; l < n; ++l) {
            q1s.eval(t0 + gamma.gamma[l], hint, warped.col(l).data());
            warped.col(l) *= std::sqrt(gamma.derivative[l]);
        }
        Rotation rot2 = Rotation::identity(d);
        if (d != 1) {
            rot2 = ku_rotation(cross_matrix(q2.values, warped, w)).first;
        }
        Eigen::MatrixXd final_q1 = rot2.matrix() * warped;
        const double e = weighted_mismatch(final_q1, q2.values, w);
        if (e < best.energy) {
            best = {e, s, std::move(rot2), std::move(gamma), std::move(final_q1)};
        }
    }

    RegistrationResult res;
    res.t0 = t[best.shift];
    res.rotation = best.rotation;
    res.distance = std::sqrt(best.energy); // L2 mismatch norm
    res.registered_srvf1 = std::move(best.hat_q1);
    res.registered_srvf2 = q2.values;
    res.partition = t;
    res.iterations = 1;

    res.registered_curve1.resize(d, n);
    int hint = 0;
    for (int l = 0; l < n; ++l) {
        b1s.eval(res.t0 + best.gamma.gamma[l], hint, res.registered_curve1.col(l).data());
    }
    res.registered_curve1 = best.rotation.matrix() * res.registered_curve1;
    res.registered_curve2 = b2.points;
    res.gamma = std::move(best.gamma);
    return res;
}

RegistrationResult procedure1_prime(const ShapeFunction& q1, const ShapeFunction& q2,
                                    const Curve& b1, const Curve& b2,
                                    const PipelineConfig& cfg) {
    if (q1.dim() != 1 || q2.dim() != 1) {
        throw WrongCase("procedure 1' only applies to scalar curves");
    }
    if (q1.periodic || q2.periodic) {
        throw WrongCase("procedure 1' only applies to open curves");
    }
    const int n = q1.size();
    const Eigen::VectorXd& t = q1.partition.values;
    const Eigen::VectorXd w = trapezoid_weights(t);

    Diffeomorphism gamma = adapt_dp(q1, q2, cfg.dp);
    const VectorSpline q2s(q2.partition.values, q2.values, false);
    Eigen::MatrixXd hat_q2 = reparametrize(q2s, gamma);

    RegistrationResult res;
    res.t0 = 0.0;
    res.rotation = Rotation::identity(1);
    res.distance = std::sqrt(weighted_mismatch(q1.values, hat_q2, w));
    res.registered_srvf1 = q1.values;
    res.registered_srvf2 = std::move(hat_q2);
    res.partition = t;
    res.iterations = 1;

    const VectorSpline b2s(b2.partition, b2.points, false);
    res.registered_curve1 = b1.points;
    res.registered_curve2.resize(1, n);
    int hint = 0;
    for (int l = 0; l < n; ++l) {
        b2s.eval(gamma.gamma[l], hint, res.registered_curve2.col(l).data());
    }
    res.gamma = std::move(gamma);
    return res;
}

RegistrationResult procedure2(const std::vector<double>& k, const ShapeFunction& q1,
                              const ShapeFunction& q2, const Curve& b1, const Curve& b2,
                              const PipelineConfig& cfg) {
    return run_alternating(k, q1, q2, b1, b2, cfg, false);
}

RegistrationResult procedure3(const std::vector<double>& k, const ShapeFunction& q1,
                              const ShapeFunction& q2, const Curve& b1, const Curve& b2,
                              const PipelineConfig& cfg) {
    if (!(q1.periodic && q2.periodic)) {
        throw NotClosed("procedure 3 requires two closed curves");
    }
    return run_alternating(k, q1, q2, b1, b2, cfg, true);
}

namespace {

RegistrationResult compute_one_direction(const Curve& c1raw, const Curve& c2raw,
                                         const PipelineConfig& cfg) {
    c1raw.validate();
    c2raw.validate();
    if (c1raw.dim() != c2raw.dim()) {
        throw MalformedInput("curves live in different dimensions");
    }
    const Curve c1 = normalize(c1raw);
    const Curve c2 = normalize(c2raw);

    const auto common = build_common_partition(c1, c2);
    if (!common.has_value()) {
        // d == 1, both open: keep the original partitions.
        if (cfg.use_fft) throw NotClosed("the FFT pass requires two closed curves");
        const ShapeFunction q1 = compute_srvf(c1);
        const ShapeFunction q2 = compute_srvf(c2);
        return procedure1_prime(q1, q2, c1, c2, cfg);
    }

    const Curve r1 = resample(c1, *common);
    const Curve r2 = resample(c2, *common);

    // Curve 1 of the registration owns the starting-point set, so it must
    // be a closed curve whenever one exists; for two closed curves the one
    // with more input samples wins, ties to the first.
    bool swapped = false;
    if (!c1.closed && c2.closed) {
        swapped = true;
    } else if (c1.closed && c2.closed && c2raw.size() > c1raw.size()) {
        swapped = true;
    }
    const Curve& first = swapped ? r2 : r1;
    const Curve& second = swapped ? r1 : r2;

    if (cfg.use_fft && !(first.closed && second.closed)) {
        throw NotClosed("the FFT pass requires two closed curves");
    }

    const ShapeFunction q1 = compute_srvf(first);
    const ShapeFunction q2 = compute_srvf(second);
    const std::vector<double> k = starting_point_set(first, second, *common, cfg.stride);

    RegistrationResult res;
    if (cfg.use_procedure1) {
        res = procedure1(k, q1, q2, first, second, cfg);
    } else if (cfg.use_fft) {
        res = procedure3(k, q1, q2, first, second, cfg);
    } else {
        res = procedure2(k, q1, q2, first, second, cfg);
    }
    res.curves_swapped = swapped;
    return res;
}

} // namespace

RegistrationResult compute_esd(const Curve& c1, const Curve& c2, const PipelineConfig& cfg) {
    RegistrationResult res = compute_one_direction(c1, c2, cfg);
    if (cfg.try_both_directions) {
        RegistrationResult rev = compute_one_direction(c1, reverse_direction(c2), cfg);
        if (rev.distance < res.distance) {
            rev.direction_reversed = true;
            return rev;
        }
    }
    return res;
}

} // namespace esd
