#include "rafr/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "rafr/dsp.hpp"

namespace rafr {

using std::numbers::pi;

OpCountReport op_counts(const RadarConfig& cfg, const RafConfig& raf_cfg) {
    cfg.validate();
    raf_cfg.validate();
    OpCountReport r;
    r.n_samples = cfg.n_samples;
    r.n_chirps = cfg.n_chirps;
    r.n_neurons = raf_cfg.n_neurons;
    r.n_detect_chirps = raf_cfg.n_detect_chirps;
    const auto log2i = [](int n) { return static_cast<std::int64_t>(std::lround(std::log2(n))); };
    r.fft_detection_ops = static_cast<std::int64_t>(cfg.n_chirps) * cfg.n_samples * log2i(cfg.n_samples);
    r.raf_detection_ops = static_cast<std::int64_t>(raf_cfg.n_neurons) * raf_cfg.n_detect_chirps * cfg.n_samples;
    r.doppler_fft_ops = static_cast<std::int64_t>(cfg.n_chirps) * log2i(cfg.n_chirps);
    r.goertzel_doppler_ops = cfg.n_chirps;
    return r;
}

const char* variant_name(PipelineVariant v) {
    switch (v) {
        case PipelineVariant::RafGoertzel: return "raf";
        case PipelineVariant::FftDetectGoertzel: return "fft-goertzel";
        case PipelineVariant::FftDetectFftFeatures: return "fft-fft";
    }
    return "unknown";
}

std::optional<PipelineVariant> variant_from_name(const std::string& name) {
    if (name == "raf") return PipelineVariant::RafGoertzel;
    if (name == "fft-goertzel") return PipelineVariant::FftDetectGoertzel;
    if (name == "fft-fft") return PipelineVariant::FftDetectFftFeatures;
    return std::nullopt;
}

std::optional<int> fft_detect_bin(const FrameCube& preprocessed, const RafConfig& raf_cfg) {
    const int ns = preprocessed.n_samples;
    const int half = ns / 2;
    const int nc = std::min(raf_cfg.n_detect_chirps, preprocessed.n_chirps);
    std::vector<double> mags(half, 0.0);
    for (int c = 0; c < nc; ++c) {
        const auto spec = dsp::range_fft({preprocessed.chirp(0, c), static_cast<std::size_t>(ns)});
        for (int k = 0; k < half; ++k) mags[k] += std::abs(spec[k]);
    }
    for (double& m : mags) m /= nc;

    std::vector<double> sorted(mags.begin() + 1, mags.end());  // DC excluded everywhere
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double tau = 3.0 * median;

    std::vector<int> survivors;
    for (int k = 1; k < half; ++k)
        if (mags[k] >= tau && mags[k] > 0.0) survivors.push_back(k);
    if (survivors.empty()) return std::nullopt;

    int cluster_end = 0;
    while (cluster_end + 1 < static_cast<int>(survivors.size()) &&
           survivors[cluster_end + 1] == survivors[cluster_end] + 1)
        ++cluster_end;
    int best = survivors[0];
    for (int i = 1; i <= cluster_end; ++i)
        if (mags[survivors[i]] > mags[best]) best = survivors[i];
    return best;
}

namespace {

FeatureVector fft_doppler_features(const FrameCube& pp, int bin, double spacing) {
    const int na = pp.n_antennas, nc = pp.n_chirps, ns = pp.n_samples;
    // conventional path: per-chirp range FFT, then a slow-time FFT at the bin
    std::vector<std::vector<dsp::Complex>> doppler(na);
    for (int a = 0; a < na; ++a) {
        std::vector<dsp::Complex> coeffs(nc);
        for (int c = 0; c < nc; ++c) {
            const auto spec = dsp::range_fft({pp.chirp(a, c), static_cast<std::size_t>(ns)});
            coeffs[c] = spec[bin];
        }
        doppler[a] = dsp::doppler_fft(coeffs);
    }
    std::vector<double> mag(nc, 0.0);
    for (int d = 0; d < nc; ++d) {
        for (int a = 0; a < na; ++a) mag[d] += std::abs(doppler[a][d]);
        mag[d] /= na;
    }
    int peak = 1;
    for (int d = 2; d < nc; ++d)
        if (mag[d] > mag[peak]) peak = d;

    FeatureVector fv;
    fv.range_bin = static_cast<double>(bin);
    if (mag[peak] <= 0.0) return fv;  // no motion energy outside DC
    fv.doppler_phase = dsp::wrap_phase(2.0 * pi * peak / nc);
    const double dphi_az =
        dsp::wrap_phase(std::arg(doppler[2][peak]) - std::arg(doppler[0][peak]));
    const double dphi_el =
        dsp::wrap_phase(std::arg(doppler[2][peak]) - std::arg(doppler[1][peak]));
    fv.azimuth = dsp::monopulse_angle(dphi_az, spacing);
    fv.elevation = dsp::monopulse_angle(dphi_el, spacing);
    fv.rms_amplitude = mag[peak];
    return fv;
}

}  // namespace

std::vector<FeatureVector> pipeline_features(const Recording& recording,
                                             PipelineVariant variant, const RafConfig& raf_cfg,
                                             const RadarConfig& radar_cfg) {
    std::vector<FeatureVector> out;
    out.reserve(recording.frames.size());
    for (const FrameCube& frame : recording.frames) {
        const FrameCube pp = dsp::preprocess(frame);
        std::optional<int> bin;
        if (variant == PipelineVariant::RafGoertzel)
            bin = detect_target(pp, raf_cfg).bin;
        else
            bin = fft_detect_bin(pp, raf_cfg);
        if (variant == PipelineVariant::FftDetectFftFeatures) {
            out.push_back(bin ? fft_doppler_features(pp, *bin,
                                                     radar_cfg.antenna_spacing_wavelengths)
                              : FeatureVector{});
        } else {
            out.push_back(features_at_bin(pp, bin, radar_cfg.antenna_spacing_wavelengths));
        }
    }
    return out;
}

std::vector<BenchmarkRow> run_benchmark(const std::vector<Recording>& dataset,
                                        const std::vector<PipelineVariant>& variants,
                                        int repetitions, const RafConfig& raf_cfg,
                                        const RadarConfig& radar_cfg) {
    if (repetitions < 1) throw std::invalid_argument("run_benchmark: repetitions < 1");
    const OpCountReport ops = op_counts(radar_cfg, raf_cfg);
    std::size_t n_frames = 0;
    for (const Recording& r : dataset) n_frames += r.frames.size();
    if (n_frames == 0) throw std::invalid_argument("run_benchmark: empty dataset");

    std::vector<BenchmarkRow> rows;
    for (PipelineVariant v : variants) {
        std::vector<double> us_per_frame;
        for (int rep = 0; rep < repetitions; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            for (const Recording& rec : dataset)
                (void)pipeline_features(rec, v, raf_cfg, radar_cfg);
            const auto t1 = std::chrono::steady_clock::now();
            us_per_frame.push_back(
                std::chrono::duration<double, std::micro>(t1 - t0).count() / n_frames);
        }
        std::sort(us_per_frame.begin(), us_per_frame.end());
        BenchmarkRow row;
        row.variant = v;
        row.detect_ops =
            v == PipelineVariant::RafGoertzel ? ops.raf_detection_ops : ops.fft_detection_ops;
        row.feature_ops = v == PipelineVariant::FftDetectFftFeatures ? ops.doppler_fft_ops
                                                                     : ops.goertzel_doppler_ops;
        row.median_us_per_frame = us_per_frame[us_per_frame.size() / 2];
        rows.push_back(row);
    }
    return rows;
}

void write_benchmark_csv(const std::string& path, const std::vector<BenchmarkRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "variant,detect_ops,feature_ops,median_us_per_frame,accuracy\n";
    for (const BenchmarkRow& r : rows) {
        os << variant_name(r.variant) << "," << r.detect_ops << "," << r.feature_ops << ","
           << r.median_us_per_frame << ",";
        if (r.accuracy >= 0.0)
            os << r.accuracy;
        os << "\n";
    }
}

}  // namespace rafr
