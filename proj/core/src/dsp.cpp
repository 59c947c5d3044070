#include "rafr/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rafr {
namespace dsp {

using std::numbers::pi;

double wrap_phase(double phi) {
    phi = std::fmod(phi, 2.0 * pi);
    if (phi > pi) phi -= 2.0 * pi;
    if (phi <= -pi) phi += 2.0 * pi;
    return phi;
}

FrameCube mti_mean_removal(const FrameCube& frame) {
    FrameCube out = frame;
    const int na = out.n_antennas, nc = out.n_chirps, ns = out.n_samples;
    for (int a = 0; a < na; ++a) {
        // fast-time mean per chirp
        for (int c = 0; c < nc; ++c) {
            double mean = 0.0;
            for (int n = 0; n < ns; ++n) mean += out.at(a, c, n);
            mean /= ns;
            for (int n = 0; n < ns; ++n) out.at(a, c, n) -= mean;
        }
        // slow-time mean per sample index
        for (int n = 0; n < ns; ++n) {
            double mean = 0.0;
            for (int c = 0; c < nc; ++c) mean += out.at(a, c, n);
            mean /= nc;
            for (int c = 0; c < nc; ++c) out.at(a, c, n) -= mean;
        }
    }
    return out;
}

FrameCube minmax_normalize(const FrameCube& frame) {
    FrameCube out = frame;
    auto [lo_it, hi_it] = std::minmax_element(out.data.begin(), out.data.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        std::fill(out.data.begin(), out.data.end(), 0.0);
        return out;
    }
    const double inv = 1.0 / (hi - lo);
    for (double& v : out.data) v = (v - lo) * inv;
    return out;
}

Complex goertzel(std::span<const double> samples, int bin) {
    const int n = static_cast<int>(samples.size());
    if (bin < 0 || bin >= n) throw std::out_of_range("goertzel: bin out of range");
    const double w = 2.0 * pi * bin / n;
    const double coeff = 2.0 * std::cos(w);
    double s1 = 0.0, s2 = 0.0;
    for (double x : samples) {
        const double s0 = x + coeff * s1 - s2;
        s2 = s1;
        s1 = s0;
    }
    // y = s[N-1] e^{jw} - s[N-2], rotated back to the forward-DFT convention
    const Complex y = s1 * std::exp(Complex(0.0, w)) - s2;
    return y * std::exp(Complex(0.0, -w * (n - 1))) * std::exp(Complex(0.0, -w));
}

Complex naive_dft_bin(std::span<const double> samples, int bin) {
    const int n = static_cast<int>(samples.size());
    if (bin < 0 || bin >= n) throw std::out_of_range("naive_dft_bin: bin out of range");
    Complex acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        const double ph = -2.0 * pi * bin * i / n;
        acc += samples[i] * Complex(std::cos(ph), std::sin(ph));
    }
    return acc;
}

void fft_inplace(std::vector<Complex>& x, bool inverse) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_inplace: length must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = x[i + k];
                const Complex v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (Complex& c : x) c *= inv;
    }
}

std::vector<Complex> range_fft(std::span<const double> chirp) {
    std::vector<Complex> x(chirp.begin(), chirp.end());
    fft_inplace(x);
    x.resize(chirp.size() / 2);
    return x;
}

std::vector<Complex> doppler_fft(std::span<const Complex> chirp_coefficients) {
    std::vector<Complex> x(chirp_coefficients.begin(), chirp_coefficients.end());
    fft_inplace(x);
    return x;
}

double monopulse_angle(double phase_diff, double spacing_wavelengths) {
    double arg = phase_diff / (2.0 * pi * spacing_wavelengths);
    arg = std::clamp(arg, -1.0, 1.0);
    return std::asin(arg);
}

}  // namespace dsp
}  // namespace rafr
