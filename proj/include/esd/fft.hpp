#pragma once

#include <complex>
#include <vector>

namespace esd::detail {

// Discrete Fourier transform plan for a fixed length n (any n >= 1).
// Power-of-two lengths run the iterative radix-2 transform directly;
// other lengths go through Bluestein's chirp reduction to a padded
// power-of-two convolution, so every length costs O(n log n).
class FftPlan {
public:
    explicit FftPlan(int n);

    int length() const { return n_; }

    // Unnormalized forward DFT, X_k = sum_j x_j e^{-2pi i jk/n}.
    std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& x) const;

    // Inverse DFT including the 1/n factor.
    std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& x) const;

private:
    std::vector<std::complex<double>> transform(const std::vector<std::complex<double>>& x,
                                                bool inverse) const;

    int n_;
    int padded_ = 0;                          // power-of-two work length (Bluestein)
    std::vector<std::complex<double>> chirp_; // e^{-pi i j^2/n}, j = 0..n-1
    std::vector<std::complex<double>> chirp_spectrum_fwd_; // FFT of the padded conjugate chirp
    std::vector<std::complex<double>> chirp_spectrum_inv_;
};

// In-place radix-2 transform; a.size() must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

} // namespace esd::detail
