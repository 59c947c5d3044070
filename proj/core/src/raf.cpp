#include "rafr/raf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rafr/dsp.hpp"

namespace rafr {

using std::numbers::pi;

void RafConfig::validate() const {
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("RafConfig: alpha not in (0,1)");
    if (v_th <= 0.0) throw std::invalid_argument("RafConfig: v_th must be positive");
    if (n_neurons < 2) throw std::invalid_argument("RafConfig: n_neurons < 2");
    if (n_detect_chirps < 1) throw std::invalid_argument("RafConfig: n_detect_chirps < 1");
    if (samples_per_chirp != 2 * n_neurons)
        throw std::invalid_argument("RafConfig: n_neurons must equal samples_per_chirp/2");
}

bool raf_step(RafNeuronState& state, double input, double alpha, double v_th) {
    const double c = std::cos(state.phase_increment);
    const double s = std::sin(state.phase_increment);
    const double decay = 1.0 - alpha;
    const double prev_im = state.im;
    const double re = decay * (c * state.re - s * state.im) + alpha * input;
    const double im = decay * (s * state.re + c * state.im);
    state.re = re;
    state.im = im;
    state.peak_magnitude = std::max(state.peak_magnitude, std::hypot(re, im));
    return im >= v_th && prev_im < v_th;
}

std::vector<RafNeuronState> run_raf_bank(std::span<const double> stream, const RafConfig& cfg) {
    std::vector<RafNeuronState> bank(cfg.n_neurons);
    for (int k = 0; k < cfg.n_neurons; ++k)
        bank[k].phase_increment = 2.0 * pi * k / cfg.samples_per_chirp;
    for (int k = 0; k < cfg.n_neurons; ++k) {
        RafNeuronState& neuron = bank[k];
        for (std::size_t n = 0; n < stream.size(); ++n) {
            if (raf_step(neuron, stream[n], cfg.alpha, cfg.v_th)) {
                ++neuron.spike_count;
                if (!neuron.first_spike_step) neuron.first_spike_step = static_cast<int>(n);
            }
        }
    }
    return bank;
}

DetectionResult detect_target(const FrameCube& preprocessed, const RafConfig& cfg) {
    cfg.validate();
    if (preprocessed.n_samples != cfg.samples_per_chirp)
        throw std::invalid_argument("detect_target: samples per chirp mismatch");
    const int nc = std::min(cfg.n_detect_chirps, preprocessed.n_chirps);

    std::vector<double> stream;
    stream.reserve(static_cast<std::size_t>(nc) * cfg.samples_per_chirp);
    for (int c = 0; c < nc; ++c) {
        const double* p = preprocessed.chirp(0, c);
        stream.insert(stream.end(), p, p + cfg.samples_per_chirp);
    }
    // min-max normalization leaves a residual DC that would ring the
    // low-frequency neurons during their transient
    double mean = 0.0;
    for (double v : stream) mean += v;
    mean /= static_cast<double>(stream.size());
    for (double& v : stream) v -= mean;

    const std::vector<RafNeuronState> bank = run_raf_bank(stream, cfg);

    DetectionResult result;
    result.spike_counts.resize(cfg.n_neurons);
    result.peak_magnitudes.resize(cfg.n_neurons);
    result.first_spike_steps.resize(cfg.n_neurons);
    for (int k = 0; k < cfg.n_neurons; ++k) {
        result.spike_counts[k] = bank[k].spike_count;
        result.peak_magnitudes[k] = bank[k].peak_magnitude;
        result.first_spike_steps[k] = bank[k].first_spike_step;
    }

    // Spike rate normalized by the neuron's own resonance period, so low
    // bins (few possible crossings per stream) compare fairly with high ones.
    const double steps = static_cast<double>(stream.size());
    std::vector<double> rate(cfg.n_neurons, 0.0);
    double rate_max = 0.0;
    for (int k = 1; k < cfg.n_neurons; ++k) {
        const double periods = std::max(1.0, steps * k / cfg.samples_per_chirp);
        rate[k] = bank[k].spike_count / periods;
        rate_max = std::max(rate_max, rate[k]);
    }
    if (rate_max < cfg.min_spike_rate) return result;

    const double rate_floor = cfg.candidate_fraction * rate_max;
    const double peak_floor = cfg.detection_margin * cfg.v_th;
    std::vector<int> candidates;
    for (int k = 1; k < cfg.n_neurons; ++k) {
        if (bank[k].spike_count >= 1 && rate[k] >= rate_floor &&
            bank[k].peak_magnitude >= peak_floor)
            candidates.push_back(k);
    }
    if (candidates.empty()) return result;

    // lowest contiguous cluster = target closest to the radar
    int cluster_end = 0;
    while (cluster_end + 1 < static_cast<int>(candidates.size()) &&
           candidates[cluster_end + 1] == candidates[cluster_end] + 1)
        ++cluster_end;

    int best = candidates[0];
    for (int i = 1; i <= cluster_end; ++i) {
        if (bank[candidates[i]].peak_magnitude > bank[best].peak_magnitude)
            best = candidates[i];
    }
    result.bin = best;
    return result;
}

std::optional<int> find_gesture_frame(const std::vector<DetectionResult>& per_frame) {
    // A real hand is detected over a run of consecutive frames, so only
    // count frames whose detection is corroborated by a neighbor; isolated
    // single-frame detections are noise and must not set the minimum bin.
    const std::size_t n = per_frame.size();
    auto has_bin = [&](std::size_t f) { return f < n && per_frame[f].bin.has_value(); };
    std::vector<char> corroborated(n, 0);
    bool any = false;
    for (std::size_t f = 0; f < n; ++f) {
        if (has_bin(f) && (has_bin(f - 1) || has_bin(f + 1))) {
            corroborated[f] = 1;
            any = true;
        }
    }
    if (!any)  // fall back to lone detections
        for (std::size_t f = 0; f < n; ++f) corroborated[f] = has_bin(f);

    int b_min = -1;
    for (std::size_t f = 0; f < n; ++f)
        if (corroborated[f] && (b_min < 0 || *per_frame[f].bin < b_min))
            b_min = *per_frame[f].bin;
    if (b_min < 0) return std::nullopt;
    for (std::size_t f = 0; f < n; ++f)
        if (corroborated[f] && *per_frame[f].bin == b_min) return static_cast<int>(f);
    return std::nullopt;
}

std::optional<int> find_gesture_frame(const Recording& recording, const RafConfig& cfg) {
    std::vector<DetectionResult> detections;
    detections.reserve(recording.frames.size());
    for (const FrameCube& frame : recording.frames)
        detections.push_back(detect_target(dsp::preprocess(frame), cfg));
    return find_gesture_frame(detections);
}

std::vector<GestureClass> label_recording(int n_frames, int gesture_frame, GestureClass kind) {
    if (kind == GestureClass::Background)
        throw std::invalid_argument("label_recording: kind must be a gesture");
    if (gesture_frame < 0 || gesture_frame >= n_frames)
        throw std::out_of_range("label_recording: gesture_frame out of range");
    const int before = (kind == GestureClass::Push) ? 5 : 4;
    const int after = (kind == GestureClass::Push) ? 3 : 4;
    std::vector<GestureClass> labels(n_frames, GestureClass::Background);
    const int lo = std::max(0, gesture_frame - before);
    const int hi = std::min(n_frames - 1, gesture_frame + after);
    for (int f = lo; f <= hi; ++f) labels[f] = kind;
    return labels;
}

}  // namespace rafr
