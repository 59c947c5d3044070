#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rafr/dsp.hpp"
#include "rafr/rng.hpp"

using namespace rafr;
using dsp::Complex;
using std::numbers::pi;

namespace {

FrameCube random_cube(Rng& rng, int na = 3, int nc = 32, int ns = 64) {
    FrameCube f(na, nc, ns);
    for (double& v : f.data) v = rng.normal();
    return f;
}

}  // namespace

TEST_CASE("mti_mean_removal zeroes constant cubes") {
    FrameCube f(2, 4, 8);
    for (double& v : f.data) v = 5.0;
    const FrameCube out = dsp::mti_mean_removal(f);
    for (double v : out.data) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("mti_mean_removal cancels identical chirps") {
    Rng rng(1);
    FrameCube f(1, 8, 16);
    std::vector<double> chirp(16);
    for (double& v : chirp) v = rng.normal();
    for (int c = 0; c < 8; ++c)
        for (int n = 0; n < 16; ++n) f.at(0, c, n) = chirp[n];
    const FrameCube out = dsp::mti_mean_removal(f);
    for (double v : out.data) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("mti_mean_removal nulls per-sample and global means") {
    Rng rng(2);
    const FrameCube out = dsp::mti_mean_removal(random_cube(rng));
    double global = 0.0;
    for (int a = 0; a < out.n_antennas; ++a) {
        for (int n = 0; n < out.n_samples; ++n) {
            double mean = 0.0;
            for (int c = 0; c < out.n_chirps; ++c) mean += out.at(a, c, n);
            CHECK(std::abs(mean / out.n_chirps) < 1e-9);
        }
    }
    for (double v : out.data) global += v;
    CHECK(std::abs(global / static_cast<double>(out.data.size())) < 1e-9);
}

TEST_CASE("mti_mean_removal is idempotent") {
    Rng rng(3);
    const FrameCube once = dsp::mti_mean_removal(random_cube(rng));
    const FrameCube twice = dsp::mti_mean_removal(once);
    for (std::size_t i = 0; i < once.data.size(); ++i)
        CHECK(std::abs(once.data[i] - twice.data[i]) < 1e-12);
}

TEST_CASE("minmax_normalize maps extremes to 0 and 1") {
    FrameCube f(1, 1, 3);
    f.data = {-1.0, 0.0, 1.0};
    const FrameCube out = dsp::minmax_normalize(f);
    CHECK(out.data[0] == doctest::Approx(0.0));
    CHECK(out.data[1] == doctest::Approx(0.5));
    CHECK(out.data[2] == doctest::Approx(1.0));
}

TEST_CASE("minmax_normalize degenerate frame is zero") {
    FrameCube f(1, 2, 4);
    for (double& v : f.data) v = 7.5;
    const FrameCube out = dsp::minmax_normalize(f);
    for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("minmax_normalize output spans [0,1]") {
    Rng rng(4);
    const FrameCube out = dsp::minmax_normalize(random_cube(rng));
    double lo = 1e9, hi = -1e9;
    for (double v : out.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(1.0));
}

TEST_CASE("goertzel on an exact tone returns N/2") {
    std::vector<double> x(64);
    for (int n = 0; n < 64; ++n) x[n] = std::cos(2.0 * pi * 5 * n / 64);
    const Complex g = dsp::goertzel(x, 5);
    CHECK(g.real() == doctest::Approx(32.0).epsilon(1e-9));
    CHECK(std::abs(g.imag()) < 1e-9);
}

TEST_CASE("goertzel of zeros is zero") {
    std::vector<double> x(32, 0.0);
    CHECK(std::abs(dsp::goertzel(x, 7)) == 0.0);
}

TEST_CASE("goertzel matches the naive DFT for random inputs") {
    Rng rng(5);
    for (int n : {8, 16, 64}) {
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> x(n);
            double mx = 0.0;
            for (double& v : x) {
                v = rng.normal();
                mx = std::max(mx, std::abs(v));
            }
            for (int k = 0; k < n; ++k) {
                const Complex a = dsp::goertzel(x, k);
                const Complex b = dsp::naive_dft_bin(x, k);
                CHECK(std::abs(a - b) <= 1e-9 * n * mx);
            }
        }
    }
}

TEST_CASE("goertzel rejects out-of-range bins") {
    std::vector<double> x(16, 1.0);
    CHECK_THROWS_AS((void)dsp::goertzel(x, 16), std::out_of_range);
    CHECK_THROWS_AS((void)dsp::goertzel(x, -1), std::out_of_range);
}

TEST_CASE("naive_dft_bin basics") {
    std::vector<double> impulse(16, 0.0);
    impulse[0] = 1.0;
    for (int k = 0; k < 16; ++k)
        CHECK(std::abs(dsp::naive_dft_bin(impulse, k) - Complex(1.0, 0.0)) < 1e-12);

    std::vector<double> ones(16, 1.0);
    CHECK(std::abs(dsp::naive_dft_bin(ones, 0) - Complex(16.0, 0.0)) < 1e-9);
    for (int k = 1; k < 16; ++k) CHECK(std::abs(dsp::naive_dft_bin(ones, k)) < 1e-9);
}

TEST_CASE("naive_dft_bin conjugate symmetry for real input") {
    Rng rng(6);
    std::vector<double> x(32);
    for (double& v : x) v = rng.normal();
    for (int k = 1; k < 32; ++k) {
        const Complex a = dsp::naive_dft_bin(x, 32 - k);
        const Complex b = std::conj(dsp::naive_dft_bin(x, k));
        CHECK(std::abs(a - b) < 1e-9);
    }
}

TEST_CASE("range_fft matches the DFT oracle") {
    Rng rng(7);
    std::vector<double> impulse(64, 0.0);
    impulse[0] = 1.0;
    for (const Complex& c : dsp::range_fft(impulse))
        CHECK(std::abs(c - Complex(1.0, 0.0)) < 1e-12);

    std::vector<double> tone(64);
    for (int n = 0; n < 64; ++n) tone[n] = std::cos(2.0 * pi * 16 * n / 64);
    const auto spec = dsp::range_fft(tone);
    CHECK(std::abs(spec[16]) == doctest::Approx(32.0).epsilon(1e-12));
    for (int k = 0; k < 32; ++k)
        if (k != 16) CHECK(std::abs(spec[k]) < 1e-9);

    std::vector<double> x(64);
    double mx = 0.0;
    for (double& v : x) {
        v = rng.normal();
        mx = std::max(mx, std::abs(v));
    }
    const auto fx = dsp::range_fft(x);
    for (int k = 0; k < 32; ++k)
        CHECK(std::abs(fx[k] - dsp::naive_dft_bin(x, k)) <= 1e-9 * 64 * mx);
}

TEST_CASE("range_fft rejects non-power-of-two input") {
    std::vector<double> x(60, 0.0);
    CHECK_THROWS_AS((void)dsp::range_fft(x), std::invalid_argument);
}

TEST_CASE("doppler_fft basics and oracle") {
    std::vector<Complex> constant(32, Complex(1.5, -0.5));
    auto spec = dsp::doppler_fft(constant);
    CHECK(std::abs(spec[0] - Complex(48.0, -16.0)) < 1e-9);
    for (int k = 1; k < 32; ++k) CHECK(std::abs(spec[k]) < 1e-9);

    std::vector<Complex> rot(32);
    for (int c = 0; c < 32; ++c) rot[c] = std::exp(Complex(0.0, 2.0 * pi * 4 * c / 32));
    spec = dsp::doppler_fft(rot);
    CHECK(std::abs(spec[4]) == doctest::Approx(32.0).epsilon(1e-9));

    Rng rng(8);
    std::vector<Complex> x(32);
    for (Complex& v : x) v = Complex(rng.normal(), rng.normal());
    spec = dsp::doppler_fft(x);
    for (int k = 0; k < 32; ++k) {
        Complex ref(0.0, 0.0);
        for (int n = 0; n < 32; ++n)
            ref += x[n] * std::exp(Complex(0.0, -2.0 * pi * k * n / 32));
        CHECK(std::abs(spec[k] - ref) < 1e-8);
    }
}

TEST_CASE("fft inverse round trip") {
    Rng rng(9);
    std::vector<Complex> x(128);
    for (Complex& v : x) v = Complex(rng.normal(), rng.normal());
    auto y = x;
    dsp::fft_inplace(y);
    dsp::fft_inplace(y, true);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) < 1e-9);
}

TEST_CASE("monopulse_angle analytic points") {
    CHECK(dsp::monopulse_angle(0.0, 0.5) == doctest::Approx(0.0));
    CHECK(dsp::monopulse_angle(pi / 2, 0.5) == doctest::Approx(std::asin(0.5)).epsilon(1e-12));
    CHECK(dsp::monopulse_angle(pi, 0.5) == doctest::Approx(pi / 2).epsilon(1e-12));
}

TEST_CASE("monopulse_angle is odd") {
    Rng rng(10);
    for (int i = 0; i < 50; ++i) {
        const double dphi = rng.uniform(-pi, pi);
        CHECK(dsp::monopulse_angle(-dphi, 0.5) ==
              doctest::Approx(-dsp::monopulse_angle(dphi, 0.5)).epsilon(1e-12));
    }
}

TEST_CASE("wrap_phase lands in (-pi, pi]") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const double w = dsp::wrap_phase(rng.uniform(-50.0, 50.0));
        CHECK(w > -pi - 1e-12);
        CHECK(w <= pi + 1e-12);
    }
    CHECK(dsp::wrap_phase(pi) == doctest::Approx(pi));
    CHECK(dsp::wrap_phase(-pi) == doctest::Approx(pi));
}
