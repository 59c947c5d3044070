#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rafr/features.hpp"
#include "rafr/radar.hpp"
#include "rafr/raf.hpp"

namespace rafr {

/// Abstract operation counts for the detection / Doppler stages, matching
/// the usual FFT vs single-bin complexity accounting.
struct OpCountReport {
    std::int64_t fft_detection_ops = 0;     // N_c * N_s * log2(N_s)
    std::int64_t raf_detection_ops = 0;     // N_raf * (n_detect_chirps * N_s)
    std::int64_t doppler_fft_ops = 0;       // N_c * log2(N_c)
    std::int64_t goertzel_doppler_ops = 0;  // N_c
    int n_samples = 0;
    int n_chirps = 0;
    int n_neurons = 0;
    int n_detect_chirps = 0;
};

OpCountReport op_counts(const RadarConfig& cfg, const RafConfig& raf_cfg);

enum class PipelineVariant {
    RafGoertzel,          // proposed: RAF detection + Goertzel features
    FftDetectGoertzel,    // FFT-threshold detection + Goertzel features
    FftDetectFftFeatures, // FFT detection + Doppler-FFT features
};

const char* variant_name(PipelineVariant v);
std::optional<PipelineVariant> variant_from_name(const std::string& name);

/// FFT-threshold hand detection on one preprocessed frame: average the
/// detection chirps' magnitude spectra, zero bins below 3x the median, and
/// take the peak of the lowest surviving cluster.
std::optional<int> fft_detect_bin(const FrameCube& preprocessed, const RafConfig& raf_cfg);

/// Per-frame features for one recording under the given variant
/// (detection and feature paths as described above). RafGoertzel is also
/// accepted so callers can run all three through one entry point.
std::vector<FeatureVector> pipeline_features(const Recording& recording,
                                             PipelineVariant variant, const RafConfig& raf_cfg,
                                             const RadarConfig& radar_cfg);

struct BenchmarkRow {
    PipelineVariant variant;
    std::int64_t detect_ops = 0;
    std::int64_t feature_ops = 0;
    double median_us_per_frame = 0.0;
    double accuracy = -1.0;  // negative when no model was supplied
};

/// Time per-frame feature extraction for each variant over a dataset and
/// (optionally) evaluate a trained model per variant.
std::vector<BenchmarkRow> run_benchmark(const std::vector<Recording>& dataset,
                                        const std::vector<PipelineVariant>& variants,
                                        int repetitions, const RafConfig& raf_cfg,
                                        const RadarConfig& radar_cfg);

void write_benchmark_csv(const std::string& path, const std::vector<BenchmarkRow>& rows);

}  // namespace rafr
