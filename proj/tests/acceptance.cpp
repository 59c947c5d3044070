// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Runs against the library only (no CLI) so failures point at code,
// not plumbing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "rafr/baseline.hpp"
#include "rafr/dataset.hpp"
#include "rafr/dsp.hpp"
#include "rafr/features.hpp"
#include "rafr/gru.hpp"
#include "rafr/raf.hpp"
#include "rafr/simulate.hpp"

using namespace rafr;
using std::numbers::pi;

namespace {

int g_failures = 0;

void report(int idx, const char* desc, bool ok, double seconds) {
    std::printf("criterion %2d: %s - %s (%.1f s)\n", idx, ok ? "PASS" : "FAIL", desc, seconds);
    if (!ok) ++g_failures;
}

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

const RadarConfig kRadar;
const RafConfig kRaf;

FrameCube grid_target_frame(int bin, int doppler_m, double az, double el, Rng& rng) {
    const double v = doppler_m * kRadar.max_velocity() / 16.0;
    std::vector<TargetState> targets{{bin * kRadar.range_resolution(), v, az, el, 1.0}};
    return synth_frame(kRadar, targets, 0.0, rng);
}

int dft_argmax(const FrameCube& pre) {
    int best = 1;
    double best_mag = -1.0;
    for (int k = 1; k < pre.n_samples / 2; ++k) {
        double m = 0.0;
        for (int c = 0; c < 3; ++c)
            m += std::abs(dsp::naive_dft_bin(
                {pre.chirp(0, c), static_cast<std::size_t>(pre.n_samples)}, k));
        if (m > best_mag) {
            best_mag = m;
            best = k;
        }
    }
    return best;
}

void criterion_1() {
    Timer t;
    Rng rng(1);
    bool ok = true;
    for (int n : {8, 16, 64}) {
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> x(n);
            double mx = 0.0;
            for (double& v : x) {
                v = rng.normal();
                mx = std::max(mx, std::abs(v));
            }
            for (int k = 0; k < n; ++k)
                if (std::abs(dsp::goertzel(x, k) - dsp::naive_dft_bin(x, k)) > 1e-9 * n * mx)
                    ok = false;
        }
    }
    report(1, "Goertzel matches the DFT on all bins of 300 random vectors", ok, t.seconds());
}

void criterion_2() {
    Timer t;
    Rng rng(2);
    int single_agree = 0;
    for (int i = 0; i < 200; ++i) {
        const int bin = static_cast<int>(rng.uniform_int(2, 30));
        int m = static_cast<int>(rng.uniform_int(1, 15));
        if (rng.uniform() < 0.5) m = -m;
        const FrameCube pre = dsp::preprocess(grid_target_frame(bin, m, 0.0, 0.0, rng));
        const auto detected = detect_target(pre, kRaf).bin;
        if (detected && *detected == dft_argmax(pre)) ++single_agree;
    }

    int hand_wins = 0;
    for (int i = 0; i < 200; ++i) {
        const int hand_bin = static_cast<int>(rng.uniform_int(5, 15));
        const int body_bin = hand_bin + static_cast<int>(rng.uniform_int(8, 14));
        int m = static_cast<int>(rng.uniform_int(2, 14));
        if (rng.uniform() < 0.5) m = -m;
        const double v = m * kRadar.max_velocity() / 16.0;
        std::vector<TargetState> targets{
            {hand_bin * kRadar.range_resolution(), v, 0.0, 0.0, 1.0},
            {body_bin * kRadar.range_resolution(), -v / 2.0, 0.0, 0.0, 2.0},
        };
        const FrameCube pre = dsp::preprocess(synth_frame(kRadar, targets, 0.0, rng));
        const auto detected = detect_target(pre, kRaf).bin;
        if (detected && *detected == hand_bin) ++hand_wins;
    }
    const bool ok = single_agree >= 190 && hand_wins >= 180;
    std::printf("              single-target agreement %d/200, hand-over-body %d/200\n",
                single_agree, hand_wins);
    report(2, "detection matches the DFT argmax and prefers the near target", ok, t.seconds());
}

void criterion_3() {
    Timer t;
    const bool ok = std::abs(kRadar.range_resolution() - 0.0375) < 1e-4 &&
                    std::abs(kRadar.max_range() - 1.1993) < 1e-3 &&
                    std::abs(kRadar.max_velocity() - 4.129) < 0.01;
    report(3, "derived constants: 0.0375 m, 1.1993 m, 4.129 m/s", ok, t.seconds());
}

void criterion_4() {
    Timer t;
    report(4, "GRU has exactly 1206 trainable parameters", GruModel().param_count() == 1206,
           t.seconds());
}

void criterion_5() {
    Timer t;
    Rng rng(5);
    bool ok = true;
    for (int inst = 0; inst < 20; ++inst) {
        GruModel m;
        m.init_uniform(rng);
        std::vector<std::array<double, 5>> x(7);
        for (auto& row : x)
            for (double& v : row) v = rng.normal();
        std::vector<int> y(7);
        for (int& v : y) v = static_cast<int>(rng.uniform_int(0, 5));

        std::vector<double> grad(m.params().size(), 0.0);
        m.backward(x, y, grad, 1.0);
        const double h = 1e-5;
        for (std::size_t p = 0; p < m.params().size(); ++p) {
            const double saved = m.params()[p];
            m.params()[p] = saved + h;
            const double lp = nll_loss(m.forward(x), y);
            m.params()[p] = saved - h;
            const double lm = nll_loss(m.forward(x), y);
            m.params()[p] = saved;
            const double fd = (lp - lm) / (2.0 * h);
            const double denom = std::max({std::abs(fd), std::abs(grad[p]), 1e-6});
            if (std::abs(grad[p] - fd) / denom > 1e-4) ok = false;
        }
    }
    report(5, "BPTT gradients match finite differences on 20 instances", ok, t.seconds());
}

void criterion_6() {
    Timer t;
    const OpCountReport r = op_counts(kRadar, kRaf);
    const bool ok = r.fft_detection_ops == 12288 && r.raf_detection_ops == 6144 &&
                    r.doppler_fft_ops == 160 && r.goertzel_doppler_ops == 32;
    report(6, "op counts are 12288 / 6144 / 160 / 32", ok, t.seconds());
}

void criterion_7() {
    Timer t;
    Rng rng(7);
    bool ok = true;
    double worst_angle = 0.0, worst_doppler = 0.0;
    for (int i = 0; i < 500; ++i) {
        const int bin = static_cast<int>(rng.uniform_int(2, 30));
        int m = static_cast<int>(rng.uniform_int(1, 15));
        if (rng.uniform() < 0.5) m = -m;
        const double az = rng.uniform(-pi / 4, pi / 4);
        const double el = rng.uniform(-pi / 4, pi / 4);
        const FrameCube pre = dsp::preprocess(grid_target_frame(bin, m, az, el, rng));
        const FeatureVector fv =
            features_at_bin(pre, bin, kRadar.antenna_spacing_wavelengths);
        if (fv.range_bin != bin) ok = false;
        worst_doppler = std::max(worst_doppler, std::abs(fv.doppler_phase - m * pi / 16.0));
        worst_angle = std::max({worst_angle, std::abs(fv.azimuth - az),
                                std::abs(fv.elevation - el)});
    }
    ok = ok && worst_angle <= 0.02 && worst_doppler <= 1e-3;
    std::printf("              max angle error %.2e rad, max doppler error %.2e rad\n",
                worst_angle, worst_doppler);
    report(7, "feature recovery on 500 noiseless targets", ok, t.seconds());
}

void criterion_8() {
    Timer t;
    bool ok = true;
    const auto swipe = label_recording(100, 50, GestureClass::SwipeRight);
    for (int f = 0; f < 100; ++f)
        if ((swipe[f] == GestureClass::SwipeRight) != (f >= 46 && f <= 54)) ok = false;
    const auto push = label_recording(100, 50, GestureClass::Push);
    for (int f = 0; f < 100; ++f)
        if ((push[f] == GestureClass::Push) != (f >= 45 && f <= 53)) ok = false;
    const auto head = label_recording(100, 1, GestureClass::SwipeUp);
    const auto tail = label_recording(100, 98, GestureClass::Push);
    int n_head = 0, n_tail = 0;
    for (int f = 0; f < 100; ++f) {
        n_head += head[f] == GestureClass::SwipeUp;
        n_tail += tail[f] == GestureClass::Push;
    }
    // g=1 swipe clips to [0, 5]; g=98 push clips to [93, 99]
    ok = ok && n_head == 6 && n_tail == 7;
    report(8, "label windows: swipe [g-4,g+4], push [g-5,g+3], clipped", ok, t.seconds());
}

// ----------------------------------------------------------- end to end

struct PipelineRun {
    std::vector<SequenceExample> train_set, val_set, test_set;
    std::vector<GruModel> models;
    double mean_accuracy = 0.0;
};

std::vector<Recording> make_dataset(std::vector<GestureClass>& labels_out) {
    const std::uint64_t seed = 42;
    TrajectoryParams params;  // noise_std 0.05 default
    std::vector<Recording> recordings;
    for (int cls = 0; cls < kNumClasses; ++cls) {
        for (int i = 0; i < 100; ++i) {
            const std::uint64_t rec_seed = (seed << 20) ^
                                           (static_cast<std::uint64_t>(cls) << 14) ^
                                           static_cast<std::uint64_t>(i);
            recordings.push_back(synth_gesture_recording(
                kRadar, static_cast<GestureClass>(cls), params, rec_seed));
            labels_out.push_back(static_cast<GestureClass>(cls));
        }
    }
    return recordings;
}

std::vector<FeatureVector> recording_features(const Recording& rec, PipelineVariant variant) {
    return pipeline_features(rec, variant, kRaf, kRadar);
}

PipelineRun run_pipeline(const std::vector<Recording>& recordings,
                         const std::vector<Split>& splits, PipelineVariant variant,
                         int n_seeds) {
    // per-recording raw feature sequences + frame labels
    std::vector<std::vector<std::array<double, 5>>> raw(recordings.size());
    std::vector<std::vector<int>> ys(recordings.size());
    std::vector<std::array<double, kNumFeatures>> train_rows;
    for (std::size_t r = 0; r < recordings.size(); ++r) {
        const auto feats = recording_features(recordings[r], variant);
        std::vector<GestureClass> labels(feats.size(), GestureClass::Background);
        if (recordings[r].label != GestureClass::Background) {
            const auto g = gesture_frame_from_features(feats);
            if (g)
                labels = label_recording(static_cast<int>(feats.size()), *g,
                                         recordings[r].label);
        }
        for (std::size_t f = 0; f < feats.size(); ++f) {
            raw[r].push_back(feats[f].as_array());
            ys[r].push_back(static_cast<int>(labels[f]));
            if (splits[r] == Split::Train) train_rows.push_back(feats[f].as_array());
        }
    }
    const FeatureScaler scaler = fit_scaler(train_rows);

    PipelineRun run;
    for (std::size_t r = 0; r < recordings.size(); ++r) {
        SequenceExample ex;
        ex.recording_label = recordings[r].label;
        ex.y = ys[r];
        for (const auto& row : raw[r]) ex.x.push_back(apply_scaler(scaler, row));
        (splits[r] == Split::Train ? run.train_set
         : splits[r] == Split::Val ? run.val_set
                                   : run.test_set)
            .push_back(std::move(ex));
    }

    TrainConfig cfg;  // Table-style defaults: lr 1.58e-3, wd 1.6e-5, batch 32
    cfg.n_seeds = n_seeds;
    for (int s = 0; s < n_seeds; ++s) {
        auto [model, history] = train(run.train_set, run.val_set, cfg, s);
        run.models.push_back(std::move(model));
    }
    run.mean_accuracy = evaluate(run.models, run.test_set).mean_accuracy;
    return run;
}

void criteria_9_and_10() {
    Timer t;
    std::vector<GestureClass> labels;
    const auto recordings = make_dataset(labels);
    const auto splits = assign_splits(labels);

    const PipelineRun raf_run =
        run_pipeline(recordings, splits, PipelineVariant::RafGoertzel, 10);
    std::printf("              raf pipeline mean accuracy %.2f%%\n",
                100.0 * raf_run.mean_accuracy);
    const PipelineRun fft_run =
        run_pipeline(recordings, splits, PipelineVariant::FftDetectGoertzel, 10);
    std::printf("              fft pipeline mean accuracy %.2f%%\n",
                100.0 * fft_run.mean_accuracy);

    const bool ok9 = raf_run.mean_accuracy >= 0.90 &&
                     std::abs(raf_run.mean_accuracy - fft_run.mean_accuracy) <= 0.05;
    report(9, "end-to-end accuracy >= 90% with RAF/FFT parity within 5 points", ok9,
           t.seconds());

    // criterion 10: identical seeds reproduce every artifact bitwise
    Timer t10;
    bool ok10 = true;
    std::vector<GestureClass> labels2;
    TrajectoryParams params;
    for (std::size_t r : {std::size_t{0}, std::size_t{250}, std::size_t{599}}) {
        const int cls = static_cast<int>(r) / 100;
        const int i = static_cast<int>(r) % 100;
        const std::uint64_t rec_seed = (std::uint64_t{42} << 20) ^
                                       (static_cast<std::uint64_t>(cls) << 14) ^
                                       static_cast<std::uint64_t>(i);
        const Recording redo = synth_gesture_recording(
            kRadar, static_cast<GestureClass>(cls), params, rec_seed);
        for (std::size_t f = 0; f < redo.frames.size(); ++f)
            if (redo.frames[f].data != recordings[r].frames[f].data) ok10 = false;
    }

    const auto feats_a = recording_features(recordings[250], PipelineVariant::RafGoertzel);
    const auto feats_b = recording_features(recordings[250], PipelineVariant::RafGoertzel);
    for (std::size_t f = 0; f < feats_a.size(); ++f)
        if (feats_a[f].as_array() != feats_b[f].as_array()) ok10 = false;

    TrainConfig cfg;
    cfg.n_seeds = 1;
    auto [model_redo, hist_redo] = train(raf_run.train_set, raf_run.val_set, cfg, 0);
    if (model_redo.params() != raf_run.models[0].params()) ok10 = false;

    report(10, "re-running with identical seeds is bitwise reproducible", ok10, t10.seconds());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criteria_9_and_10();
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
