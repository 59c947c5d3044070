#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rafr/radar.hpp"
#include "rafr/rng.hpp"

namespace rafr {

/// Trajectory knobs for the synthetic gesture generator. Ranges are in
/// meters, speeds in m/s; each recording draws its own values inside
/// these bounds.
struct TrajectoryParams {
    int gesture_frames = 25;        // contiguous frames containing the hand
    double hand_amplitude = 1.0;    // reflector strength before 1/r^2 rolloff
    double swipe_close_range_min = 0.18;
    double swipe_close_range_max = 0.30;
    double swipe_half_span_min = 0.25;  // lateral half-travel of a swipe
    double swipe_half_span_max = 0.40;
    double push_start_range_min = 0.55;
    double push_start_range_max = 0.75;
    double push_min_range_min = 0.12;
    double push_min_range_max = 0.20;
    bool include_body = true;       // static torso behind the hand
    double body_range_min = 0.85;
    double body_range_max = 1.10;
    double body_amplitude = 0.8;
    double noise_std = 0.05;

    void validate() const;
};

/// Reference range for the 1/r^2 amplitude rolloff: a target of amplitude A
/// at this range produces IF samples of peak amplitude A.
inline constexpr double kAmplitudeReferenceRange = 0.3;

/// Synthesize one frame of IF samples for a set of point targets plus
/// white noise. Deterministic given the rng state.
FrameCube synth_frame(const RadarConfig& cfg, const std::vector<TargetState>& targets,
                      double noise_std, Rng& rng);

/// Generate a full recording for one gesture class. Background yields
/// noise-only frames (plus the optional body). Ground truth is populated
/// per frame; frames without a hand carry NaN target fields.
Recording synth_gesture_recording(const RadarConfig& cfg, GestureClass kind,
                                  const TrajectoryParams& params, std::uint64_t seed);

}  // namespace rafr
