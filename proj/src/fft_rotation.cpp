#include "esd/fft_rotation.hpp"

#include "esd/errors.hpp"
#include "esd/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace esd {

namespace {

void require_uniform_periodic_pair(const ShapeFunction& q1, const ShapeFunction& q2) {
    if (!q1.periodic || !q2.periodic) {
        throw NotPeriodic("circular cross matrices require periodic shape functions");
    }
    if (!q1.partition.uniform || !q2.partition.uniform) {
        throw NonUniformPartition("circular cross matrices require a uniform partition");
    }
    if (q1.size() != q2.size() || q1.dim() != q2.dim()) {
        throw PartitionMismatch("shape functions differ in size or dimension");
    }
}

} // namespace

std::vector<CrossMatrix> circular_cross_matrices(const ShapeFunction& q1,
                                                 const ShapeFunction& q2) {
    require_uniform_periodic_pair(q1, q2);
    const int n = q1.size() - 1; // sequence length
    const int d = q1.dim();
    detail::FftPlan plan(n);

    // Index-reversed first sequence: hat_q1(l) = q1(N-l+1), l = 1..N-1.
    std::vector<std::vector<std::complex<double>>> spec1(d), spec2(d);
    std::vector<std::complex<double>> buf(n);
    for (int k = 0; k < d; ++k) {
        for (int l = 0; l < n; ++l) {
            buf[l] = q1.values(k, (n - l) % n);
        }
        spec1[k] = plan.forward(buf);
        for (int l = 0; l < n; ++l) {
            buf[l] = q2.values(k, l);
        }
        spec2[k] = plan.forward(buf);
    }

    std::vector<CrossMatrix> out(n);
    for (int m = 0; m < n; ++m) out[m].entries.resize(d, d);

    double max_residue = 0.0;
    double max_value = 0.0;
    std::vector<std::complex<double>> prod(n);
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j < d; ++j) {
            for (int l = 0; l < n; ++l) prod[l] = spec1[k][l] * spec2[j][l];
            const auto seq = plan.inverse(prod);
            for (int m = 0; m < n; ++m) {
                out[m].entries(k, j) = seq[m].real();
                max_residue = std::max(max_residue, std::abs(seq[m].imag()));
                max_value = std::max(max_value, std::abs(seq[m].real()));
            }
        }
    }
    // Real inputs: the imaginary parts are pure rounding noise and get
    // discarded, but only if they are negligible at the data's scale.
    if (max_residue > 1e-9 * std::max(1.0, max_value)) {
        throw NumericalFailure("imaginary residue after inverse transform too large");
    }
    return out;
}

std::vector<ShiftRotationCandidate> ku2(const ShapeFunction& q1, const ShapeFunction& q2,
                                        const std::vector<int>& admissible, int itop) {
    require_uniform_periodic_pair(q1, q2);
    const int n = q1.size() - 1;

    std::vector<int> shifts;
    if (admissible.empty()) {
        shifts.resize(n);
        for (int m = 0; m < n; ++m) shifts[m] = m + 1;
    } else {
        shifts = admissible;
        for (int m : shifts) {
            if (m < 1 || m > n) throw MalformedInput("shift index out of range");
        }
    }
    if (itop < 1 || itop > static_cast<int>(shifts.size())) {
        throw ItopTooLarge("itop exceeds the number of admissible shifts");
    }

    const auto matrices = circular_cross_matrices(q1, q2);
    const double h = 1.0 / n;

    std::vector<ShiftRotationCandidate> candidates;
    candidates.reserve(shifts.size());
    for (int m : shifts) {
        CrossMatrix a;
        a.entries = h * matrices[m - 1].entries;
        auto [rot, maxtrace] = ku_rotation(a);
        candidates.push_back({m, std::move(rot), maxtrace});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const ShiftRotationCandidate& a, const ShiftRotationCandidate& b) {
                  if (a.maxtrace != b.maxtrace) return a.maxtrace > b.maxtrace;
                  return a.m < b.m;
              });
    candidates.resize(itop);
    return candidates;
}

} // namespace esd
