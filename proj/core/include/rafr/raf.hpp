#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rafr/radar.hpp"

namespace rafr {

/// Parameters of the resonate-and-fire detection bank. alpha and v_th are
/// calibrated against preprocessed frames whose values lie in [0, 1].
struct RafConfig {
    int n_neurons = 32;
    double alpha = 0.018;
    double v_th = 0.02;
    int n_detect_chirps = 3;
    int samples_per_chirp = 64;

    // Detection gates. A neuron is a candidate when its spike rate reaches
    // candidate_fraction of the best rate; a detection is reported only if
    // some membrane peak reaches detection_margin * v_th.
    double candidate_fraction = 0.5;
    double min_spike_rate = 0.35;
    double detection_margin = 2.5;

    void validate() const;
};

/// One damped complex oscillator. phase_increment is 2 pi k / N_s for
/// neuron k, so neuron index maps directly onto range-DFT bins.
struct RafNeuronState {
    double re = 0.0;
    double im = 0.0;
    double phase_increment = 0.0;
    int spike_count = 0;
    std::optional<int> first_spike_step;
    double peak_magnitude = 0.0;  // max |state| seen so far
};

/// Advance one neuron by one input sample: rotate by the resonance phase,
/// decay by (1 - alpha), inject alpha * input into the real part. Spikes
/// on an upward crossing of v_th by the imaginary part; no reset.
bool raf_step(RafNeuronState& state, double input, double alpha, double v_th);

struct DetectionResult {
    std::optional<int> bin;  // in [1, n_neurons - 1] when present
    std::vector<int> spike_counts;
    std::vector<double> peak_magnitudes;
    std::vector<std::optional<int>> first_spike_steps;
};

/// Run the full neuron bank over a sample stream (zero initial state).
std::vector<RafNeuronState> run_raf_bank(std::span<const double> stream, const RafConfig& cfg);

/// Detect the hand's range bin in one preprocessed frame. The first
/// n_detect_chirps chirps of antenna 0 are concatenated into one stream
/// (with its residual DC removed) and fed to the bank. Candidate neurons
/// cluster around resonances; the peak of the lowest cluster wins, which
/// prefers the hand over the body behind it.
DetectionResult detect_target(const FrameCube& preprocessed, const RafConfig& cfg);

/// Earliest frame whose detected bin equals the minimum detected bin over
/// the recording (the closest approach of the hand). Detections not
/// corroborated by a neighboring frame's detection are ignored unless no
/// frame is corroborated, so an isolated false alarm cannot set the
/// minimum bin.
std::optional<int> find_gesture_frame(const std::vector<DetectionResult>& per_frame);

/// Convenience: preprocess every frame, detect, locate the gesture frame.
std::optional<int> find_gesture_frame(const Recording& recording, const RafConfig& cfg);

/// Frame-wise labels around the gesture frame: Swipe windows span
/// [g-4, g+4], Push [g-5, g+3], clipped at recording boundaries.
std::vector<GestureClass> label_recording(int n_frames, int gesture_frame, GestureClass kind);

}  // namespace rafr
