// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. Criterion ids can be
// passed as arguments to run a subset.

#include "esd/curve.hpp"
#include "esd/dp.hpp"
#include "esd/errors.hpp"
#include "esd/fft_rotation.hpp"
#include "esd/pipeline.hpp"
#include "esd/rotation.hpp"
#include "esd/spline.hpp"
#include "esd/srvf.hpp"
#include "helpers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace esd;
using namespace esd::testing;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    template <typename T>
    Check& note(const char* label, const T& value) {
        if (detail.tellp() > 0) detail << ", ";
        detail << label << "=" << value;
        return *this;
    }
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << ", ";
            detail << "VIOLATED: " << what;
        }
    }
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// ---------------------------------------------------------------- helpers

RegistrationResult run_pair(const Curve& a, const Curve& b, const PipelineConfig& cfg) {
    return compute_esd(a, b, cfg);
}

// Independent full-grid dynamic program: straight recursion over all
// predecessor pairs with its own trapezoid energy loop. Used as the
// optimality oracle for small instances.
double naive_full_dp(const ShapeFunction& q1, const ShapeFunction& q2) {
    const int n = q1.size(), m = q2.size();
    const Eigen::VectorXd& t = q1.partition.values;
    const Eigen::VectorXd& z = q2.partition.values;
    const VectorSpline q2s(z, q2.values, q2.periodic);

    auto seg = [&](int k, int l, int i, int j) {
        const double slope = (z[j] - z[l]) / (t[i] - t[k]);
        const double root = std::sqrt(slope);
        auto f = [&](int p) {
            const double a = z[l] + slope * (t[p] - t[k]);
            return (q1.values.col(p) - root * q2s(a)).squaredNorm();
        };
        double e = 0.0;
        for (int p = k; p < i; ++p) {
            e += 0.5 * (t[p + 1] - t[p]) * (f(p + 1) + f(p));
        }
        return e;
    };

    const double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd table = Eigen::MatrixXd::Constant(n, m, inf);
    table(0, 0) = 0.0;
    for (int i = 1; i < n; ++i) {
        for (int j = 1; j < m; ++j) {
            const bool corner = (i == n - 1 && j == m - 1);
            if ((i == n - 1 || j == m - 1) && !corner) continue;
            double best = inf;
            for (int k = 0; k < i; ++k) {
                for (int l = 0; l < j; ++l) {
                    if (table(k, l) == inf) continue;
                    best = std::min(best, table(k, l) + seg(k, l, i, j));
                }
            }
            table(i, j) = best;
        }
    }
    return table(n - 1, m - 1);
}

// ---------------------------------------------------------------- criteria

RegistrationResult helix33_result;
bool helix33_done = false;

RegistrationResult helix_3v3() {
    if (!helix33_done) {
        helix33_result = run_pair(helix_z(3, 451), helix_x(3, 451), PipelineConfig{});
        helix33_done = true;
    }
    return helix33_result;
}

Check criterion1() {
    Check c;
    struct Case {
        int loops, samples;
        double expected, tolerance;
    };
    const Case cases[] = {{3, 451, 0.00000, 0.01}, {4, 601, 0.48221, 0.03},
                          {5, 751, 0.60352, 0.03}};
    const Curve first = helix_z(3, 451);
    for (const Case& k : cases) {
        const double t0 = now_seconds();
        const RegistrationResult res =
            (k.loops == 3) ? helix_3v3()
                           : run_pair(first, helix_x(k.loops, k.samples), PipelineConfig{});
        const double dt = now_seconds() - t0;
        std::ostringstream label;
        label << "d(3," << k.loops << ")";
        c.note(label.str().c_str(), res.distance);
        c.require(std::abs(res.distance - k.expected) <= k.tolerance,
                  label.str() + " outside " + std::to_string(k.expected) + " +/- " +
                      std::to_string(k.tolerance));
        c.require(dt <= 120.0, label.str() + " took longer than 120 s");
    }
    return c;
}

Check criterion2() {
    Check c;
    const RegistrationResult res = helix_3v3();
    Eigen::Matrix3d perm;
    perm << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    const double dev = (res.rotation.matrix() - perm).cwiseAbs().maxCoeff();
    c.note("max rotation deviation", dev);
    c.require(dev <= 0.05, "rotation not entrywise within 0.05 of the permutation");
    return c;
}

Check criterion3() {
    Check c;
    const Curve e1 = ellipsoid_z(2.0, 1.3, 1.0, wobbly_angles(1001));
    const Curve e2 = ellipsoid_x(2.0, 1.0, 1.3, uniform_angles(901));

    PipelineConfig direct;
    const RegistrationResult r2 = run_pair(e1, e2, direct);
    PipelineConfig fft = direct;
    fft.use_fft = true;
    const RegistrationResult r3 = run_pair(e1, e2, fft);

    c.note("procedure2", r2.distance).note("procedure3", r3.distance);
    c.note("iters2", r2.iterations).note("iters3", r3.iterations);
    c.require(r2.distance <= 0.02, "procedure2 distance above 0.02");
    c.require(r3.distance <= 0.02, "procedure3 distance above 0.02");
    c.require(std::abs(r2.distance - r3.distance) <= 1e-6,
              "procedures disagree beyond 1e-6");
    c.require(r2.iterations <= 3, "procedure2 repeat loop ran more than 3 times");
    c.require(r3.iterations <= 3, "procedure3 repeat loop ran more than 3 times");
    return c;
}

Check criterion4() {
    Check c;
    const Curve e1 = ellipsoid_z(2.0, 1.3, 1.0, wobbly_angles(1001));
    const Curve e2 = ellipsoid_x(2.0, 1.0, 1.3, uniform_angles(901));
    const Curve e1r = reverse_direction(e1);

    const RegistrationResult rev = run_pair(e1r, e2, PipelineConfig{});
    c.note("reversed distance", rev.distance);
    c.require(std::abs(rev.distance - 0.195) <= 0.03,
              "reversed-direction distance outside 0.195 +/- 0.03");

    PipelineConfig both;
    both.try_both_directions = true;
    const RegistrationResult fixed = run_pair(e1r, e2, both);
    c.note("with direction search", fixed.distance);
    c.require(fixed.distance <= 0.02, "direction search did not restore the distance");
    c.require(fixed.direction_reversed, "direction flag not set");
    return c;
}

Check criterion5() {
    Check c;
    std::mt19937 rng(1205);
    double worst_entry = 0.0, worst_distance = 0.0;
    for (int n : {65, 257, 1025}) {
        for (int rep = 0; rep < 20; ++rep) {
            const Curve a = normalize(random_closed_curve(rng, 3, n));
            const Curve b = normalize(random_closed_curve(rng, 3, n));
            const ShapeFunction q1 = compute_srvf(a);
            const ShapeFunction q2 = compute_srvf(b);

            const auto fft_mats = circular_cross_matrices(q1, q2);
            for (int m = 0; m < n - 1; ++m) {
                Eigen::Matrix3d direct = Eigen::Matrix3d::Zero();
                for (int l = 0; l < n - 1; ++l) {
                    direct.noalias() +=
                        q1.values.col(l) * q2.values.col((m + l) % (n - 1)).transpose();
                }
                worst_entry = std::max(
                    worst_entry, (fft_mats[m].entries - direct).cwiseAbs().maxCoeff());
            }

            PartitionSpec p{q1.partition.values, true};
            const std::vector<double> k = starting_point_set(a, b, p, 1);
            PipelineConfig cfg;
            const auto r2 = procedure2(k, q1, q2, a, b, cfg);
            const auto r3 = procedure3(k, q1, q2, a, b, cfg);
            worst_distance = std::max(worst_distance, std::abs(r2.distance - r3.distance));
        }
    }
    c.note("max |A_fft - A_direct|", worst_entry);
    c.note("max |d2 - d3|", worst_distance);
    c.require(worst_entry <= 1e-9, "FFT cross matrices deviate beyond 1e-9");
    c.require(worst_distance <= 1e-8, "procedure2/procedure3 distances deviate beyond 1e-8");
    return c;
}

Check criterion6() {
    Check c;
    std::mt19937 rng(1206);
    const int n = 16385;
    const ShapeFunction q1 = random_periodic_shape(rng, 3, n);
    const ShapeFunction q2 = random_periodic_shape(rng, 3, n);

    double t0 = now_seconds();
    const auto cands = ku2(q1, q2, {}, 1);
    const double fft_time = now_seconds() - t0;

    t0 = now_seconds();
    double best = -std::numeric_limits<double>::infinity();
    int best_m = 0;
    for (int m = 1; m <= n - 1; ++m) {
        auto [rot, mt] = ku_rotation(cross_matrix(q1, shift(q2, m)));
        if (mt > best) {
            best = mt;
            best_m = m;
        }
    }
    const double loop_time = now_seconds() - t0;

    c.note("ku2 seconds", fft_time).note("per-shift seconds", loop_time);
    c.note("speedup", loop_time / fft_time);
    c.require(loop_time >= 10.0 * fft_time, "FFT pass is not 10x faster");
    c.require(cands[0].m == best_m, "FFT pass selected a different shift");
    c.require(std::abs(cands[0].maxtrace - best) <= 1e-8, "maxtrace mismatch");
    return c;
}

Check criterion7() {
    Check c;
    auto pair_at = [](int n) {
        Curve base;
        base.points.resize(3, n);
        base.partition = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
        Curve warped = base;
        const double span = 4.0 * kPi;
        for (int i = 0; i < n; ++i) {
            const double u = base.partition[i];
            base.points.col(i) << std::cos(span * u), std::sin(span * u), span * u;
            const double w = u + 0.25 * std::sin(2.0 * kPi * u) / (2.0 * kPi);
            warped.points.col(i) << std::cos(span * w), std::sin(span * w), span * w;
        }
        return std::pair<ShapeFunction, ShapeFunction>{compute_srvf(normalize(base)),
                                                       compute_srvf(normalize(warped))};
    };
    auto time_at = [&](int n) {
        const auto [q1, q2] = pair_at(n);
        double bestt = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < 3; ++rep) {
            const double t0 = now_seconds();
            adapt_dp(q1, q2, DpConfig{});
            bestt = std::min(bestt, now_seconds() - t0);
        }
        return bestt;
    };
    double prev = -1.0;
    bool ok = true;
    for (int n : {1025, 2049, 4097, 8193}) {
        const double t = time_at(n);
        if (prev > 0) {
            const double ratio = t / prev;
            std::ostringstream lbl;
            lbl << "ratio@" << n;
            c.note(lbl.str().c_str(), ratio);
            ok = ok && ratio <= 2.5;
        }
        prev = t;
    }
    c.require(ok, "wall-time doubling ratio above 2.5");
    return c;
}

Check criterion8() {
    Check c;
    std::mt19937 rng(1208);
    std::uniform_int_distribution<int> sizes(5, 17);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = sizes(rng);
        ShapeFunction q1, q2;
        q1.values.resize(2, n);
        q2.values.resize(2, n);
        for (int i = 0; i < 2 * n; ++i) {
            q1.values(i / n, i % n) = g(rng);
            q2.values(i / n, i % n) = g(rng);
        }
        q1.partition.values = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
        q1.partition.uniform = true;
        q2.partition = q1.partition;

        double adaptive = -1.0;
        adapt_dp(q1, q2, DpConfig{16, 16}, &adaptive);
        const double oracle = naive_full_dp(q1, q2);
        worst = std::max(worst, std::abs(adaptive - oracle));
    }
    c.note("max |adaptive - exhaustive|", worst);
    c.require(worst <= 1e-10, "adapt-DP missed the exhaustive minimum");
    return c;
}

Check criterion9() {
    Check c;
    std::mt19937 rng(1209);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    double worst_gap = 0.0, worst_branch = 0.0;
    const int dims[] = {2, 3, 5};
    for (int rep = 0; rep < 100; ++rep) {
        const int d = dims[rep % 3];
        Eigen::MatrixXd m(d, d);
        for (int i = 0; i < d * d; ++i) m(i / d, i % d) = g(rng);
        auto [rot, mt] = ku_rotation(CrossMatrix{m});

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::VectorXd sv = svd.singularValues();
        double bound = sv.sum();
        if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0) {
            bound -= 2.0 * sv[d - 1];
        }
        worst_branch = std::max(worst_branch, std::abs(mt - bound));

        for (int trial = 0; trial < 100000; ++trial) {
            double other;
            if (d == 2) {
                const double a = angle(rng);
                other = std::cos(a) * (m(0, 0) + m(1, 1)) + std::sin(a) * (m(1, 0) - m(0, 1));
            } else {
                const Eigen::MatrixXd q = random_rotation(rng, d);
                other = (q * m.transpose()).trace();
            }
            worst_gap = std::max(worst_gap, other - mt);
        }
    }
    c.note("max sampled excess", worst_gap);
    c.note("max branch-bound deviation", worst_branch);
    c.require(worst_gap <= 1e-9, "a sampled rotation beat the solver");
    c.require(worst_branch <= 1e-10, "maxtrace does not match the singular-value bound");
    return c;
}

Check criterion10() {
    Check c;
    std::mt19937 rng(1210);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst_rot = 0.0, worst_t = 0.0, worst_res = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 10 + rep;
        Eigen::MatrixXd y(3, n);
        for (int i = 0; i < 3 * n; ++i) y(i / n, i % n) = g(rng);
        const Eigen::MatrixXd r0 = random_rotation(rng, 3);
        const Eigen::Vector3d t0(g(rng), g(rng), g(rng));
        const Eigen::MatrixXd x = (r0 * y).colwise() + t0;
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w[i] = 0.2 + std::abs(g(rng));
        w /= w.sum();
        auto [motion, delta] = fit_rigid_motion(x, y, w);
        worst_rot = std::max(worst_rot, (motion.rotation.matrix() - r0).cwiseAbs().maxCoeff());
        worst_t = std::max(worst_t, (motion.translation - t0).norm());
        worst_res = std::max(worst_res, delta);
    }
    c.note("max rotation error", worst_rot);
    c.note("max translation error", worst_t);
    c.note("max residual", worst_res);
    c.require(worst_rot <= 1e-9, "rotation recovery above 1e-9");
    c.require(worst_t <= 1e-9, "translation recovery above 1e-9");
    c.require(worst_res <= 1e-18, "noise-free residual above 1e-18");

    // Noisy clouds must beat random rigid motions.
    bool beaten = false;
    for (int rep = 0; rep < 5 && !beaten; ++rep) {
        const int n = 25;
        Eigen::MatrixXd y(3, n);
        for (int i = 0; i < 3 * n; ++i) y(i / n, i % n) = g(rng);
        const Eigen::MatrixXd r0 = random_rotation(rng, 3);
        Eigen::MatrixXd x = r0 * y;
        for (int i = 0; i < 3 * n; ++i) x(i / n, i % n) += 0.05 * g(rng);
        const Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
        auto [motion, delta] = fit_rigid_motion(x, y, w);
        for (int trial = 0; trial < 10000; ++trial) {
            const Eigen::MatrixXd q = random_rotation(rng, 3);
            const Eigen::Vector3d t(g(rng), g(rng), g(rng));
            double other = 0.0;
            for (int l = 0; l < n; ++l) {
                other += w[l] * (x.col(l) - (q * y.col(l) + t)).squaredNorm();
            }
            if (other < delta - 1e-12) beaten = true;
        }
    }
    c.require(!beaten, "a random rigid motion beat the fitted one on noisy data");
    return c;
}

Check criterion11() {
    Check c;
    std::mt19937 rng(1211);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> dims(1, 5);

    // Rotation invariants under fuzzed cross matrices.
    for (int rep = 0; rep < 1000; ++rep) {
        const int d = dims(rng);
        Eigen::MatrixXd m(d, d);
        for (int i = 0; i < d * d; ++i) m(i / d, i % d) = g(rng);
        if (rep % 9 == 0) m.col(0).setZero();
        auto [rot, mt] = ku_rotation(CrossMatrix{m});
        const Eigen::MatrixXd& r = rot.matrix();
        c.require((r.transpose() * r - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <=
                      1e-10,
                  "rotation orthogonality");
        c.require(std::abs(r.determinant() - 1.0) <= 1e-10, "rotation determinant");
        if (d == 1) c.require(r(0, 0) == 1.0, "1-d rotation must be [1]");
        if (!c.ok) return c;
    }

    // Diffeomorphism invariants on fuzzed DP instances.
    std::uniform_int_distribution<int> sizes(4, 24);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = sizes(rng), m = sizes(rng);
        const ShapeFunction q1 = random_shape(rng, 2, n);
        const ShapeFunction q2 = random_shape(rng, 2, m);
        const Diffeomorphism gma = adapt_dp(q1, q2, DpConfig{3, 3});
        c.require(gma.gamma[0] == 0.0 && gma.gamma[n - 1] == 1.0, "gamma endpoints");
        for (int l = 0; l + 1 < n; ++l) {
            if (!(gma.gamma[l] < gma.gamma[l + 1])) {
                c.require(false, "gamma monotonicity");
                break;
            }
        }
        for (int l = 0; l < n; ++l) {
            if (!(gma.derivative[l] > 0.0)) {
                c.require(false, "gamma derivative positivity");
                break;
            }
        }
        if (!c.ok) return c;
    }

    // Curve invariants after normalization.
    for (int rep = 0; rep < 1000; ++rep) {
        const bool closed = rep % 2 == 0;
        Curve raw = closed ? random_closed_curve(rng, 3, 30 + rep % 50)
                           : random_open_curve(rng, 3, 30 + rep % 50);
        const Curve n1 = normalize(raw);
        n1.validate();
        c.require(std::abs(polyline_length(n1) - 1.0) <= 1e-9, "unit length after normalize");
        c.require(n1.partition[0] == 0.0 && n1.partition[n1.size() - 1] == 1.0,
                  "partition endpoints");
        if (closed) {
            c.require((n1.points.col(0) - n1.points.col(n1.size() - 1)).norm() <=
                          1e-8 * polyline_length(n1),
                      "closed seam");
        }
        if (!c.ok) return c;
    }

    // Shape function invariants.
    for (int rep = 0; rep < 1000; ++rep) {
        const bool closed = rep % 2 == 0;
        const int n = 401 + (rep % 3) * 100;
        Curve raw = closed ? random_closed_curve(rng, 3, n) : random_open_curve(rng, 3, n);
        const Curve nc = normalize(raw);
        const ShapeFunction q = compute_srvf(nc);
        c.require(q.size() == nc.size(), "value count");
        c.require(q.periodic == nc.closed, "periodic flag");
        if (q.periodic) {
            c.require((q.values.col(0) - q.values.col(n - 1)).norm() <= 1e-8,
                      "wrap-consistent seam");
        }
        const Eigen::VectorXd w = trapezoid_weights(q.partition.values);
        double norm = 0.0;
        for (int l = 0; l < n; ++l) norm += w[l] * q.values.col(l).squaredNorm();
        c.require(norm >= 0.98 && norm <= 1.02, "discrete SRVF norm outside [0.98, 1.02]");
        if (!c.ok) return c;
    }
    c.note("fuzz cases per type", 1000);
    return c;
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    struct Entry {
        int id;
        const char* label;
        std::function<Check()> run;
    };
    const std::vector<Entry> entries = {
        {1, "helix distance reproduction", criterion1},
        {2, "helix rotation matrix", criterion2},
        {3, "ellipsoid closed-curve case", criterion3},
        {4, "direction reversal", criterion4},
        {5, "FFT equivalence", criterion5},
        {6, "FFT speedup", criterion6},
        {7, "adapt-DP linearity", criterion7},
        {8, "small-instance DP optimality", criterion8},
        {9, "KU optimality property", criterion9},
        {10, "rigid-motion fit", criterion10},
        {11, "invariant fuzz suite", criterion11},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        if (!selected.empty() && !selected.count(e.id)) continue;
        Check c;
        try {
            c = e.run();
        } catch (const std::exception& ex) {
            c.ok = false;
            c.detail << "exception: " << ex.what();
        }
        std::printf("criterion %2d [%s]: %s (%s)\n", e.id, e.label, c.ok ? "PASS" : "FAIL",
                    c.detail.str().c_str());
        std::fflush(stdout);
        if (!c.ok) ++failures;
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
