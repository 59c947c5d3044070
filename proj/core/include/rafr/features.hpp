#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "rafr/dataset.hpp"
#include "rafr/dsp.hpp"
#include "rafr/radar.hpp"
#include "rafr/raf.hpp"

namespace rafr {

/// The five per-frame features, computed at the detected hand bin. A frame
/// with no detection yields the all-zero vector.
struct FeatureVector {
    double range_bin = 0.0;
    double doppler_phase = 0.0;
    double azimuth = 0.0;
    double elevation = 0.0;
    double rms_amplitude = 0.0;

    std::array<double, 5> as_array() const {
        return {range_bin, doppler_phase, azimuth, elevation, rms_amplitude};
    }
};

inline constexpr int kNumFeatures = 5;

/// Per-feature standardization fitted on the training split only.
struct FeatureScaler {
    std::array<double, kNumFeatures> mean{};
    std::array<double, kNumFeatures> std{};

    static constexpr double kVarianceFloor = 1e-8;
};

/// Goertzel coefficients at one bin for every antenna and chirp,
/// laid out [antenna][chirp].
struct CoefficientMatrix {
    int n_antennas = 0;
    int n_chirps = 0;
    std::vector<std::complex<double>> data;

    std::complex<double>& at(int a, int c) { return data[static_cast<std::size_t>(a) * n_chirps + c]; }
    std::complex<double> at(int a, int c) const { return data[static_cast<std::size_t>(a) * n_chirps + c]; }
};

CoefficientMatrix goertzel_matrix(const FrameCube& preprocessed, int bin);

/// Mean over antennas of the wrapped chirp-1 minus chirp-0 phase.
double doppler_feature(const CoefficientMatrix& coeffs);

/// Azimuth from antennas (2,0), elevation from (2,1); phase differences
/// wrapped, averaged over chirps, then inverted through the monopulse law.
std::pair<double, double> angle_features(const CoefficientMatrix& coeffs,
                                         double spacing_wavelengths);

double rms_amplitude(const CoefficientMatrix& coeffs);

/// Full per-frame path: preprocess, detect, and assemble the features at
/// the detected bin.
FeatureVector extract_features(const FrameCube& raw_frame, const RafConfig& raf_cfg,
                               const RadarConfig& radar_cfg);

/// Same, starting from an already preprocessed frame and a known bin
/// (absent bin yields zeros). Shared by the RAF and FFT-detect pipelines.
FeatureVector features_at_bin(const FrameCube& preprocessed, std::optional<int> bin,
                              double spacing_wavelengths);

/// Gesture frame recovered from a per-frame feature sequence: earliest
/// frame whose detected bin (range_bin > 0) equals the minimum over the
/// recording, with the same neighbor-corroboration rule as
/// find_gesture_frame. Works for any detector variant.
std::optional<int> gesture_frame_from_features(const std::vector<FeatureVector>& per_frame);

FeatureScaler fit_scaler(const std::vector<std::array<double, kNumFeatures>>& train_features);
std::array<double, kNumFeatures> apply_scaler(const FeatureScaler& scaler,
                                              const std::array<double, kNumFeatures>& features);

void save_scaler(const std::string& path, const FeatureScaler& scaler);
FeatureScaler load_scaler(const std::string& path);

/// Flat per-frame feature table, one row per (recording, frame).
struct FeatureRow {
    int recording_id = 0;
    int frame = 0;
    FeatureVector features;
    GestureClass label = GestureClass::Background;
};

void write_features_csv(const std::string& path, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_features_csv(const std::string& path);

}  // namespace rafr
