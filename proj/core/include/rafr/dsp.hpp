#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rafr/radar.hpp"

namespace rafr {
namespace dsp {

using Complex = std::complex<double>;

/// Wrap a phase to (-pi, pi].
double wrap_phase(double phi);

/// Moving-target-indication style mean removal: per antenna, subtract each
/// chirp's fast-time mean, then each sample index's slow-time mean across
/// chirps. Static returns cancel exactly.
FrameCube mti_mean_removal(const FrameCube& frame);

/// Scale the whole frame (all antennas jointly) to [0, 1]. A constant
/// frame maps to all zeros.
FrameCube minmax_normalize(const FrameCube& frame);

/// Preprocessing used ahead of target detection and feature extraction.
inline FrameCube preprocess(const FrameCube& frame) {
    return minmax_normalize(mti_mean_removal(frame));
}

/// Single-bin DFT via the Goertzel second-order recursion. Matches the
/// forward DFT X[k] = sum_n x[n] e^{-j 2 pi k n / N}.
Complex goertzel(std::span<const double> samples, int bin);

/// Direct-summation DFT coefficient; oracle for goertzel and the FFTs.
Complex naive_dft_bin(std::span<const double> samples, int bin);

/// Radix-2 in-place FFT over complex data; length must be a power of two.
void fft_inplace(std::vector<Complex>& x, bool inverse = false);

/// Fast-time FFT of one real chirp, keeping bins 0..N/2-1.
std::vector<Complex> range_fft(std::span<const double> chirp);

/// Slow-time FFT of per-chirp coefficients at a fixed range bin.
std::vector<Complex> doppler_fft(std::span<const Complex> chirp_coefficients);

/// Phase monopulse inversion: arcsin(dphi / (2 pi d)), argument clamped to
/// [-1, 1] so noisy inputs stay finite.
double monopulse_angle(double phase_diff, double spacing_wavelengths);

}  // namespace dsp
}  // namespace rafr
