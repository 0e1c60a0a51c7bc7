#include "esd/fft.hpp"

#include "esd/errors.hpp"

#include <cmath>
#include <numbers>

namespace esd::detail {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    if (!is_pow2(n)) throw NumericalFailure("fft_pow2 length must be a power of two");

    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / len;
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= n;
    }
}

FftPlan::FftPlan(int n) : n_(n) {
    if (n < 1) throw NumericalFailure("fft length must be positive");
    if (is_pow2(n_)) return;

    padded_ = next_pow2(2 * n_ - 1);
    chirp_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        // j^2 mod 2n keeps the phase argument small for large j.
        const long long jj = (static_cast<long long>(j) * j) % (2LL * n_);
        const double ang = -std::numbers::pi * static_cast<double>(jj) / n_;
        chirp_[j] = {std::cos(ang), std::sin(ang)};
    }
    auto build_spectrum = [&](bool inverse) {
        std::vector<std::complex<double>> b(padded_, {0.0, 0.0});
        for (int j = 0; j < n_; ++j) {
            const std::complex<double> c = inverse ? chirp_[j] : std::conj(chirp_[j]);
            b[j] = c;
            if (j > 0) b[padded_ - j] = c;
        }
        fft_pow2(b, false);
        return b;
    };
    chirp_spectrum_fwd_ = build_spectrum(false);
    chirp_spectrum_inv_ = build_spectrum(true);
}

std::vector<std::complex<double>> FftPlan::transform(const std::vector<std::complex<double>>& x,
                                                     bool inverse) const {
    if (static_cast<int>(x.size()) != n_) throw NumericalFailure("fft input length mismatch");
    if (is_pow2(n_)) {
        auto a = x;
        fft_pow2(a, inverse);
        if (inverse) {
            // fft_pow2 already applied 1/n.
        }
        return a;
    }

    // Bluestein: X_k = conj(c_k) * sum_j (x_j conj(c_j)) c_{k-j}, with
    // c_j the chirp for the requested direction.
    const auto& spectrum = inverse ? chirp_spectrum_inv_ : chirp_spectrum_fwd_;
    std::vector<std::complex<double>> a(padded_, {0.0, 0.0});
    for (int j = 0; j < n_; ++j) {
        const std::complex<double> c = inverse ? std::conj(chirp_[j]) : chirp_[j];
        a[j] = x[j] * c;
    }
    fft_pow2(a, false);
    for (int j = 0; j < padded_; ++j) a[j] *= spectrum[j];
    fft_pow2(a, true);

    std::vector<std::complex<double>> out(n_);
    for (int k = 0; k < n_; ++k) {
        const std::complex<double> c = inverse ? std::conj(chirp_[k]) : chirp_[k];
        out[k] = a[k] * c;
    }
    if (inverse) {
        for (auto& v : out) v /= n_;
    }
    return out;
}

std::vector<std::complex<double>> FftPlan::forward(
    const std::vector<std::complex<double>>& x) const {
    return transform(x, false);
}

std::vector<std::complex<double>> FftPlan::inverse(
    const std::vector<std::complex<double>>& x) const {
    return transform(x, true);
}

} // namespace esd::detail
