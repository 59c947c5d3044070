#include "rafr/simulate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rafr {

using std::numbers::pi;

void TrajectoryParams::validate() const {
    if (gesture_frames < 2) throw std::invalid_argument("TrajectoryParams: gesture_frames < 2");
    if (push_min_range_min <= 0.0 || swipe_close_range_min <= 0.0)
        throw std::invalid_argument("TrajectoryParams: min range must be > 0");
    if (noise_std < 0.0) throw std::invalid_argument("TrajectoryParams: negative noise_std");
    if (hand_amplitude <= 0.0) throw std::invalid_argument("TrajectoryParams: hand_amplitude <= 0");
}

FrameCube synth_frame(const RadarConfig& cfg, const std::vector<TargetState>& targets,
                      double noise_std, Rng& rng) {
    const double r_res = cfg.range_resolution();
    const double r_max = cfg.max_range();
    const double v_max = cfg.max_velocity();
    FrameCube frame(cfg.n_antennas, cfg.n_chirps, cfg.n_samples);

    for (const TargetState& t : targets) {
        if (!std::isfinite(t.range) || !std::isfinite(t.radial_velocity) ||
            !std::isfinite(t.azimuth) || !std::isfinite(t.elevation) ||
            !std::isfinite(t.amplitude))
            throw std::invalid_argument("synth_frame: non-finite target parameters");
        if (t.range < 0.0 || t.range > r_max)
            throw std::invalid_argument("synth_frame: target range outside [0, R_max]");
        if (std::abs(t.radial_velocity) > v_max)
            throw std::invalid_argument("synth_frame: |velocity| > V_max");

        const double r_eff = std::max(t.range, 0.05);
        const double amp = t.amplitude * (kAmplitudeReferenceRange / r_eff) *
                           (kAmplitudeReferenceRange / r_eff);
        const double f_beat = (t.range / r_res) * (cfg.f_sample / cfg.n_samples);
        const double phi_dopp =
            4.0 * pi * cfg.f_center * t.radial_velocity * cfg.t_chirp / kSpeedOfLight;
        const double d = cfg.antenna_spacing_wavelengths;
        const double phi0 = rng.uniform(0.0, 2.0 * pi);

        for (int a = 0; a < cfg.n_antennas; ++a) {
            double phi_ant = 0.0;
            if (a == 1) phi_ant = 2.0 * pi * d * (std::sin(t.azimuth) - std::sin(t.elevation));
            if (a == 2) phi_ant = 2.0 * pi * d * std::sin(t.azimuth);
            for (int c = 0; c < cfg.n_chirps; ++c) {
                const double base = c * phi_dopp + phi_ant + phi0;
                for (int n = 0; n < cfg.n_samples; ++n) {
                    frame.at(a, c, n) +=
                        amp * std::cos(2.0 * pi * f_beat * n / cfg.f_sample + base);
                }
            }
        }
    }
    if (noise_std > 0.0) {
        for (double& v : frame.data) v += rng.normal(0.0, noise_std);
    }
    return frame;
}

namespace {

struct HandPose {
    double range, velocity, azimuth, elevation;
};

// Straight-line pass in front of the radar: closest approach at the window
// midpoint, monotone angle sweep.
std::vector<HandPose> swipe_trajectory(GestureClass kind, const TrajectoryParams& p,
                                       double t_frame, Rng& rng) {
    const int win = p.gesture_frames;
    const double r_close = rng.uniform(p.swipe_close_range_min, p.swipe_close_range_max);
    const double half = rng.uniform(p.swipe_half_span_min, p.swipe_half_span_max);
    const double mid = (win - 1) / 2.0;

    std::vector<HandPose> traj(win);
    for (int i = 0; i < win; ++i) {
        const double x = half * (i - mid) / mid;
        traj[i].range = std::hypot(r_close, x);
        const double angle = std::atan2(x, r_close);
        switch (kind) {
            case GestureClass::SwipeRight: traj[i].azimuth = angle; traj[i].elevation = 0.0; break;
            case GestureClass::SwipeLeft: traj[i].azimuth = -angle; traj[i].elevation = 0.0; break;
            case GestureClass::SwipeUp: traj[i].azimuth = 0.0; traj[i].elevation = angle; break;
            case GestureClass::SwipeDown: traj[i].azimuth = 0.0; traj[i].elevation = -angle; break;
            default: throw std::invalid_argument("swipe_trajectory: not a swipe");
        }
    }
    for (int i = 0; i < win; ++i) {
        const int lo = std::max(i - 1, 0), hi = std::min(i + 1, win - 1);
        traj[i].velocity = (traj[hi].range - traj[lo].range) / ((hi - lo) * t_frame);
    }
    return traj;
}

// V-shaped range profile: approach for ~75% of the window, then a slight
// retraction.
std::vector<HandPose> push_trajectory(const TrajectoryParams& p, double t_frame, Rng& rng) {
    const int win = p.gesture_frames;
    const double r_start = rng.uniform(p.push_start_range_min, p.push_start_range_max);
    const double r_min = rng.uniform(p.push_min_range_min, p.push_min_range_max);
    const double r_end = r_min + 0.35 * (r_start - r_min);
    const int t_min = static_cast<int>(0.75 * win);

    std::vector<HandPose> traj(win);
    for (int i = 0; i < win; ++i) {
        double r;
        if (i <= t_min)
            r = r_start + (r_min - r_start) * static_cast<double>(i) / t_min;
        else
            r = r_min + (r_end - r_min) * static_cast<double>(i - t_min) / (win - 1 - t_min);
        traj[i] = {r, 0.0, 0.0, 0.0};
    }
    for (int i = 0; i < win; ++i) {
        const int lo = std::max(i - 1, 0), hi = std::min(i + 1, win - 1);
        traj[i].velocity = (traj[hi].range - traj[lo].range) / ((hi - lo) * t_frame);
    }
    return traj;
}

}  // namespace

Recording synth_gesture_recording(const RadarConfig& cfg, GestureClass kind,
                                  const TrajectoryParams& params, std::uint64_t seed) {
    cfg.validate();
    params.validate();
    Rng rng(seed);

    Recording rec;
    rec.label = kind;
    rec.frames.reserve(cfg.n_frames);
    rec.ground_truth.assign(cfg.n_frames,
                            TargetState{std::numeric_limits<double>::quiet_NaN(),
                                        std::numeric_limits<double>::quiet_NaN(),
                                        std::numeric_limits<double>::quiet_NaN(),
                                        std::numeric_limits<double>::quiet_NaN(),
                                        std::numeric_limits<double>::quiet_NaN()});

    const bool has_hand = kind != GestureClass::Background;
    std::vector<HandPose> traj;
    int start = 0;
    if (has_hand) {
        const int margin = 5;
        start = static_cast<int>(
            rng.uniform_int(margin, cfg.n_frames - params.gesture_frames - margin));
        traj = (kind == GestureClass::Push) ? push_trajectory(params, cfg.t_frame, rng)
                                            : swipe_trajectory(kind, params, cfg.t_frame, rng);
    }

    std::optional<TargetState> body;
    if (params.include_body) {
        body = TargetState{rng.uniform(params.body_range_min, params.body_range_max), 0.0, 0.0,
                           0.0, params.body_amplitude};
    }

    const double v_cap = 0.95 * cfg.max_velocity();
    for (int f = 0; f < cfg.n_frames; ++f) {
        std::vector<TargetState> targets;
        if (has_hand && f >= start && f < start + params.gesture_frames) {
            const HandPose& h = traj[f - start];
            TargetState hand{h.range, std::clamp(h.velocity, -v_cap, v_cap), h.azimuth,
                             h.elevation, params.hand_amplitude};
            targets.push_back(hand);
            rec.ground_truth[f] = hand;
        }
        if (body) targets.push_back(*body);
        rec.frames.push_back(synth_frame(cfg, targets, params.noise_std, rng));
    }
    return rec;
}

}  // namespace rafr
