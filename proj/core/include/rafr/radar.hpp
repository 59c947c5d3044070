#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rafr {

inline constexpr double kSpeedOfLight = 299792458.0;

/// FMCW radar operating parameters. Defaults match the 60 GHz sensor this
/// pipeline was designed around (4 GHz sweep, 64 samples x 32 chirps x
/// 100 frames, three receive antennas in an L arrangement).
struct RadarConfig {
    double f_min = 58.5e9;
    double f_max = 62.5e9;
    double f_center = 60.5e9;
    double bandwidth = 4.0e9;
    int n_samples = 64;
    int n_chirps = 32;
    int n_frames = 100;
    double t_chirp = 0.3e-3;
    double t_frame = 30e-3;
    double f_sample = 2.0e6;
    int n_antennas = 3;
    double antenna_spacing_wavelengths = 0.5;

    void validate() const;

    double range_resolution() const { return kSpeedOfLight / (2.0 * bandwidth); }
    double max_range() const { return range_resolution() * n_samples / 2.0; }
    double max_velocity() const { return kSpeedOfLight / (4.0 * f_center * t_chirp); }
};

enum class GestureClass : std::uint8_t {
    Background = 0,
    SwipeLeft = 1,
    SwipeRight = 2,
    SwipeUp = 3,
    SwipeDown = 4,
    Push = 5,
};

inline constexpr int kNumClasses = 6;

const char* gesture_name(GestureClass g);

/// Point-target state for one frame. Velocity is radial, positive away
/// from the radar. Amplitude is the reflector strength before the 1/r^2
/// range rolloff applied by the simulator.
struct TargetState {
    double range = 0.0;
    double radial_velocity = 0.0;
    double azimuth = 0.0;
    double elevation = 0.0;
    double amplitude = 0.0;
};

/// One frame of IF samples, laid out [antenna][chirp][sample].
struct FrameCube {
    int n_antennas = 0;
    int n_chirps = 0;
    int n_samples = 0;
    std::vector<double> data;

    FrameCube() = default;
    FrameCube(int na, int nc, int ns)
        : n_antennas(na), n_chirps(nc), n_samples(ns),
          data(static_cast<std::size_t>(na) * nc * ns, 0.0) {}

    double& at(int a, int c, int n) {
        return data[(static_cast<std::size_t>(a) * n_chirps + c) * n_samples + n];
    }
    double at(int a, int c, int n) const {
        return data[(static_cast<std::size_t>(a) * n_chirps + c) * n_samples + n];
    }
    /// Pointer to the n_samples values of one chirp.
    const double* chirp(int a, int c) const {
        return data.data() + (static_cast<std::size_t>(a) * n_chirps + c) * n_samples;
    }
};

/// One gesture recording: n_frames frames plus an optional per-frame
/// ground-truth track (no-target frames carry NaN fields).
struct Recording {
    GestureClass label = GestureClass::Background;
    std::vector<FrameCube> frames;
    std::vector<TargetState> ground_truth;  // empty or one entry per frame

    bool has_ground_truth() const { return !ground_truth.empty(); }
};

}  // namespace rafr
