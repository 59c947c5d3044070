// rafr - synthetic FMCW gesture pipeline driver.
//
// Subcommands: generate, features, train, eval, bench, inspect.
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rafr/baseline.hpp"
#include "rafr/dataset.hpp"
#include "rafr/dsp.hpp"
#include "rafr/features.hpp"
#include "rafr/gru.hpp"
#include "rafr/raf.hpp"
#include "rafr/simulate.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace rafr;

namespace {

constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot hash missing file: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
        for (std::streamsize i = 0; i < is.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json radar_json(const RadarConfig& c) {
    return {{"f_min", c.f_min},       {"f_max", c.f_max},
            {"f_center", c.f_center}, {"bandwidth", c.bandwidth},
            {"n_samples", c.n_samples}, {"n_chirps", c.n_chirps},
            {"n_frames", c.n_frames}, {"t_chirp", c.t_chirp},
            {"t_frame", c.t_frame},   {"f_sample", c.f_sample},
            {"n_antennas", c.n_antennas},
            {"antenna_spacing_wavelengths", c.antenna_spacing_wavelengths}};
}

json raf_json(const RafConfig& c) {
    return {{"n_neurons", c.n_neurons},
            {"alpha", c.alpha},
            {"v_th", c.v_th},
            {"n_detect_chirps", c.n_detect_chirps},
            {"samples_per_chirp", c.samples_per_chirp},
            {"candidate_fraction", c.candidate_fraction},
            {"min_spike_rate", c.min_spike_rate},
            {"detection_margin", c.detection_margin}};
}

json train_json(const TrainConfig& c) {
    return {{"lr", c.lr},           {"weight_decay", c.weight_decay},
            {"batch_size", c.batch_size}, {"max_epochs", c.max_epochs},
            {"patience", c.patience},     {"n_seeds", c.n_seeds}};
}

void write_manifest(const std::string& path, const std::string& command, json config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    m["config"] = std::move(config);
    m["inputs"] = json::array();
    for (const auto& p : inputs)
        m["inputs"].push_back({{"path", p}, {"fnv1a64", hex64(fnv1a_file(p))}});
    m["outputs"] = json::array();
    for (const auto& p : outputs)
        m["outputs"].push_back({{"path", p}, {"fnv1a64", hex64(fnv1a_file(p))}});
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write manifest: " + path);
    os << m.dump(2) << "\n";
}

// ---------------------------------------------------------------- generate

int cmd_generate(const std::string& out, const std::string& splits_path,
                 const std::string& manifest_path, int per_class, std::uint64_t seed,
                 double noise, int frames) {
    RadarConfig radar;
    radar.n_frames = frames;
    radar.validate();
    TrajectoryParams params;
    params.noise_std = noise;
    params.validate();

    std::vector<Recording> recordings;
    std::vector<GestureClass> labels;
    for (int cls = 0; cls < kNumClasses; ++cls) {
        for (int i = 0; i < per_class; ++i) {
            const std::uint64_t rec_seed =
                (seed << 20) ^ (static_cast<std::uint64_t>(cls) << 14) ^
                static_cast<std::uint64_t>(i);
            recordings.push_back(synth_gesture_recording(
                radar, static_cast<GestureClass>(cls), params, rec_seed));
            labels.push_back(static_cast<GestureClass>(cls));
        }
    }
    write_dataset(out, recordings);
    write_split_csv(splits_path, assign_splits(labels));

    json cfg;
    cfg["radar"] = radar_json(radar);
    cfg["per_class"] = per_class;
    cfg["seed"] = seed;
    cfg["noise_std"] = noise;
    write_manifest(manifest_path, "generate", cfg, {}, {out, splits_path});
    std::cout << "wrote " << recordings.size() << " recordings to " << out << "\n";
    return 0;
}

// ---------------------------------------------------------------- features

int cmd_features(const std::string& in, const std::string& splits_path, const std::string& out,
                 const std::string& scaler_path, const std::string& detector,
                 const std::string& manifest_path) {
    RadarConfig radar;
    RafConfig raf;
    const auto recordings = read_dataset(in);
    const auto splits = read_split_csv(splits_path);
    if (splits.size() != recordings.size())
        throw std::runtime_error("split file does not match dataset size");
    const PipelineVariant variant = detector == "fft" ? PipelineVariant::FftDetectGoertzel
                                                      : PipelineVariant::RafGoertzel;

    std::vector<FeatureRow> rows;
    std::vector<std::array<double, kNumFeatures>> train_rows;
    int undetected = 0;
    for (std::size_t r = 0; r < recordings.size(); ++r) {
        const Recording& rec = recordings[r];
        const auto feats = pipeline_features(rec, variant, raf, radar);
        std::vector<GestureClass> labels(rec.frames.size(), GestureClass::Background);
        if (rec.label != GestureClass::Background) {
            const auto g = gesture_frame_from_features(feats);
            if (g)
                labels = label_recording(static_cast<int>(rec.frames.size()), *g, rec.label);
            else
                ++undetected;
        }
        for (std::size_t f = 0; f < feats.size(); ++f) {
            FeatureRow row;
            row.recording_id = static_cast<int>(r);
            row.frame = static_cast<int>(f);
            row.features = feats[f];
            row.label = labels[f];
            rows.push_back(row);
            if (splits[r] == Split::Train) train_rows.push_back(feats[f].as_array());
        }
    }
    write_features_csv(out, rows);
    save_scaler(scaler_path, fit_scaler(train_rows));

    json cfg;
    cfg["radar"] = radar_json(radar);
    cfg["raf"] = raf_json(raf);
    cfg["detector"] = detector;
    write_manifest(manifest_path, "features", cfg, {in, splits_path}, {out, scaler_path});
    if (undetected > 0)
        std::cout << "warning: " << undetected
                  << " gesture recordings had no detection and were labeled Background\n";
    std::cout << "wrote " << rows.size() << " feature rows to " << out << "\n";
    return 0;
}

// ------------------------------------------------------------------ shared

std::vector<SequenceExample> build_sequences(const std::string& features_path,
                                             const std::string& scaler_path) {
    const auto rows = read_features_csv(features_path);
    const FeatureScaler scaler = load_scaler(scaler_path);
    std::map<int, SequenceExample> by_id;
    for (const auto& row : rows) {
        SequenceExample& ex = by_id[row.recording_id];
        ex.x.push_back(apply_scaler(scaler, row.features.as_array()));
        ex.y.push_back(static_cast<int>(row.label));
        if (row.label != GestureClass::Background) ex.recording_label = row.label;
    }
    std::vector<SequenceExample> out;
    out.reserve(by_id.size());
    for (auto& [id, ex] : by_id) out.push_back(std::move(ex));
    return out;
}

std::vector<SequenceExample> filter_split(const std::vector<SequenceExample>& all,
                                          const std::vector<Split>& splits, Split want) {
    if (splits.size() != all.size())
        throw std::runtime_error("split file does not match feature recordings");
    std::vector<SequenceExample> out;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (splits[i] == want) out.push_back(all[i]);
    return out;
}

// ------------------------------------------------------------------- train

int cmd_train(const std::string& features_path, const std::string& scaler_path,
              const std::string& splits_path, const std::string& out_dir,
              const TrainConfig& cfg, std::uint64_t seed_base,
              const std::string& manifest_path) {
    cfg.validate();
    const auto all = build_sequences(features_path, scaler_path);
    const auto splits = read_split_csv(splits_path);
    const auto train_set = filter_split(all, splits, Split::Train);
    const auto val_set = filter_split(all, splits, Split::Val);
    fs::create_directories(out_dir);

    std::vector<std::string> outputs;
    for (int s = 0; s < cfg.n_seeds; ++s) {
        const auto [model, history] = train(train_set, val_set, cfg, seed_base + s);
        const std::string model_path = out_dir + "/model_" + std::to_string(s) + ".json";
        const std::string log_path = out_dir + "/history_" + std::to_string(s) + ".csv";
        save_model(model_path, model);
        write_history_csv(log_path, history);
        outputs.push_back(model_path);
        outputs.push_back(log_path);
        std::cout << "seed " << seed_base + s << ": best epoch " << history.best_epoch
                  << ", val loss " << history.val_loss[history.best_epoch] << "\n";
    }

    json config;
    config["train"] = train_json(cfg);
    config["seed_base"] = seed_base;
    write_manifest(manifest_path, "train", config, {features_path, scaler_path, splits_path},
                   outputs);
    return 0;
}

// -------------------------------------------------------------------- eval

int cmd_eval(const std::string& models_dir, const std::string& features_path,
             const std::string& scaler_path, const std::string& splits_path,
             const std::string& out_dir) {
    std::vector<std::string> model_paths;
    for (const auto& entry : fs::directory_iterator(models_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("model_", 0) == 0 && entry.path().extension() == ".json")
            model_paths.push_back(entry.path().string());
    }
    std::sort(model_paths.begin(), model_paths.end());
    if (model_paths.empty()) throw std::runtime_error("no model_*.json in " + models_dir);

    std::vector<GruModel> models;
    for (const auto& p : model_paths) models.push_back(load_model(p));

    const auto all = build_sequences(features_path, scaler_path);
    const auto splits = read_split_csv(splits_path);
    const auto test_set = filter_split(all, splits, Split::Test);

    const EvalResult res = evaluate(models, test_set);
    std::printf("mean accuracy %.2f%% (std %.2f%%) over %zu models\n",
                100.0 * res.mean_accuracy, 100.0 * res.std_accuracy, models.size());
    for (std::size_t m = 0; m < res.per_model_accuracy.size(); ++m)
        std::printf("  model %zu: %.2f%%\n", m, 100.0 * res.per_model_accuracy[m]);

    fs::create_directories(out_dir);
    for (std::size_t m = 0; m < res.confusion.size(); ++m) {
        std::ofstream os(out_dir + "/confusion_" + std::to_string(m) + ".csv");
        os << "truth";
        for (int c = 0; c < kNumClasses; ++c)
            os << "," << gesture_name(static_cast<GestureClass>(c));
        os << "\n";
        for (int t = 0; t < kNumClasses; ++t) {
            os << gesture_name(static_cast<GestureClass>(t));
            for (int p = 0; p < kNumClasses; ++p) os << "," << res.confusion[m][t][p];
            os << "\n";
        }
    }
    return 0;
}

// ------------------------------------------------------------------- bench

int cmd_bench(const std::string& dataset_path, const std::vector<std::string>& variant_names,
              int reps, const std::string& out) {
    RadarConfig radar;
    RafConfig raf;
    std::vector<PipelineVariant> variants;
    for (const auto& name : variant_names) {
        const auto v = variant_from_name(name);
        if (!v) throw std::runtime_error("unknown variant: " + name);
        variants.push_back(*v);
    }
    const auto dataset = read_dataset(dataset_path);
    const auto rows = run_benchmark(dataset, variants, reps, raf, radar);
    write_benchmark_csv(out, rows);

    const OpCountReport ops = op_counts(radar, raf);
    std::cout << "op counts: fft_detection " << ops.fft_detection_ops << ", raf_detection "
              << ops.raf_detection_ops << ", doppler_fft " << ops.doppler_fft_ops
              << ", goertzel_doppler " << ops.goertzel_doppler_ops << "\n";
    for (const auto& row : rows)
        std::printf("%-14s detect_ops %8lld feature_ops %6lld median %.2f us/frame\n",
                    variant_name(row.variant), static_cast<long long>(row.detect_ops),
                    static_cast<long long>(row.feature_ops), row.median_us_per_frame);
    return 0;
}

// ----------------------------------------------------------------- inspect

int cmd_inspect(const std::string& dataset_path, int index, const std::string& raster_path,
                const std::string& features_path) {
    RadarConfig radar;
    RafConfig raf;
    const auto dataset = read_dataset(dataset_path);
    if (index < 0 || index >= static_cast<int>(dataset.size()))
        throw std::runtime_error("recording index out of range: " + std::to_string(index));
    const Recording& rec = dataset[static_cast<std::size_t>(index)];

    std::ofstream raster(raster_path);
    if (!raster) throw std::runtime_error("cannot write " + raster_path);
    raster << "frame,neuron,spike_count,first_spike_step\n";
    std::ofstream feats(features_path);
    if (!feats) throw std::runtime_error("cannot write " + features_path);
    feats << "frame,range_bin,doppler_phase,azimuth,elevation,rms_amplitude\n";

    for (std::size_t f = 0; f < rec.frames.size(); ++f) {
        const FrameCube pre = dsp::preprocess(rec.frames[f]);
        const DetectionResult det = detect_target(pre, raf);
        for (int k = 0; k < raf.n_neurons; ++k) {
            raster << f << "," << k << "," << det.spike_counts[k] << ",";
            if (det.first_spike_steps[k]) raster << *det.first_spike_steps[k];
            raster << "\n";
        }
        const FeatureVector fv =
            features_at_bin(pre, det.bin, radar.antenna_spacing_wavelengths);
        feats << f << "," << fv.range_bin << "," << fv.doppler_phase << "," << fv.azimuth << ","
              << fv.elevation << "," << fv.rms_amplitude << "\n";
    }
    std::cout << "wrote " << raster_path << " and " << features_path << " for recording "
              << index << " (" << gesture_name(rec.label) << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic FMCW hand-gesture pipeline"};
    app.require_subcommand(1);

    // generate
    std::string g_out, g_splits, g_manifest;
    int g_per_class = 100, g_frames = 100;
    std::uint64_t g_seed = 42;
    double g_noise = 0.05;
    auto* gen = app.add_subcommand("generate", "synthesize a gesture dataset");
    gen->add_option("--out", g_out, "output RAFD dataset path")->required();
    gen->add_option("--splits", g_splits, "output split-index CSV (default <out>.splits.csv)");
    gen->add_option("--manifest", g_manifest, "manifest path (default <out>.manifest.json)");
    gen->add_option("--per-class", g_per_class, "recordings per class")
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", g_seed, "master seed");
    gen->add_option("--noise", g_noise, "noise standard deviation")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--frames", g_frames, "frames per recording")->check(CLI::PositiveNumber);

    // features
    std::string f_in, f_splits, f_out, f_scaler, f_detector = "raf", f_manifest;
    auto* fea = app.add_subcommand("features", "extract per-frame features");
    fea->add_option("--in", f_in, "input RAFD dataset")->required();
    fea->add_option("--splits", f_splits, "split-index CSV")->required();
    fea->add_option("--out", f_out, "output features CSV")->required();
    fea->add_option("--scaler", f_scaler, "output scaler JSON")->required();
    fea->add_option("--detector", f_detector, "detector: raf or fft")
        ->check(CLI::IsMember({"raf", "fft"}));
    fea->add_option("--manifest", f_manifest, "manifest path (default <out>.manifest.json)");

    // train
    std::string t_features, t_scaler, t_splits, t_out_dir, t_manifest;
    TrainConfig t_cfg;
    std::uint64_t t_seed_base = 0;
    auto* tr = app.add_subcommand("train", "train the GRU classifier");
    tr->add_option("--features", t_features, "features CSV")->required();
    tr->add_option("--scaler", t_scaler, "scaler JSON")->required();
    tr->add_option("--splits", t_splits, "split-index CSV")->required();
    tr->add_option("--out-dir", t_out_dir, "model output directory")->required();
    tr->add_option("--seeds", t_cfg.n_seeds, "number of training seeds")
        ->check(CLI::PositiveNumber);
    tr->add_option("--seed-base", t_seed_base, "first seed value");
    tr->add_option("--lr", t_cfg.lr, "Adam learning rate");
    tr->add_option("--wd", t_cfg.weight_decay, "weight decay");
    tr->add_option("--batch", t_cfg.batch_size, "batch size")->check(CLI::PositiveNumber);
    tr->add_option("--epochs", t_cfg.max_epochs, "maximum epochs")->check(CLI::PositiveNumber);
    tr->add_option("--patience", t_cfg.patience, "early-stopping patience")
        ->check(CLI::PositiveNumber);
    tr->add_option("--manifest", t_manifest, "manifest path (default <out-dir>/manifest.json)");

    // eval
    std::string e_models, e_features, e_scaler, e_splits, e_out_dir;
    auto* ev = app.add_subcommand("eval", "evaluate trained models on the test split");
    ev->add_option("--models", e_models, "directory of model_*.json")->required();
    ev->add_option("--features", e_features, "features CSV")->required();
    ev->add_option("--scaler", e_scaler, "scaler JSON")->required();
    ev->add_option("--splits", e_splits, "split-index CSV")->required();
    ev->add_option("--out-dir", e_out_dir, "confusion-matrix output dir (default --models)");

    // bench
    std::string b_dataset, b_out;
    std::vector<std::string> b_variants{"raf", "fft-goertzel", "fft-fft"};
    int b_reps = 5;
    auto* be = app.add_subcommand("bench", "compare pipeline variants");
    be->add_option("--dataset", b_dataset, "input RAFD dataset")->required();
    be->add_option("--out", b_out, "output comparison CSV")->required();
    be->add_option("--variants", b_variants, "variants: raf fft-goertzel fft-fft");
    be->add_option("--reps", b_reps, "timing repetitions")->check(CLI::PositiveNumber);

    // inspect
    std::string i_dataset, i_raster, i_features;
    int i_index = 0;
    auto* in = app.add_subcommand("inspect", "dump spike raster and feature trajectory");
    in->add_option("--dataset", i_dataset, "input RAFD dataset")->required();
    in->add_option("--recording", i_index, "recording index")->required();
    in->add_option("--raster", i_raster, "output spike-raster CSV")->required();
    in->add_option("--features", i_features, "output feature-trajectory CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    // RAFR_THREADS caps parallel sections; the reference implementation is
    // single-threaded, so any value >= 1 behaves like 1.
    if (const char* threads = std::getenv("RAFR_THREADS");
        threads && std::atoi(threads) < 1) {
        std::cerr << "error: RAFR_THREADS must be a positive integer\n";
        return 2;
    }

    try {
        if (*gen) {
            if (g_splits.empty()) g_splits = g_out + ".splits.csv";
            if (g_manifest.empty()) g_manifest = g_out + ".manifest.json";
            return cmd_generate(g_out, g_splits, g_manifest, g_per_class, g_seed, g_noise,
                                g_frames);
        }
        if (*fea) {
            if (f_manifest.empty()) f_manifest = f_out + ".manifest.json";
            return cmd_features(f_in, f_splits, f_out, f_scaler, f_detector, f_manifest);
        }
        if (*tr) {
            if (t_manifest.empty()) t_manifest = t_out_dir + "/manifest.json";
            return cmd_train(t_features, t_scaler, t_splits, t_out_dir, t_cfg, t_seed_base,
                             t_manifest);
        }
        if (*ev) {
            if (e_out_dir.empty()) e_out_dir = e_models;
            return cmd_eval(e_models, e_features, e_scaler, e_splits, e_out_dir);
        }
        if (*be) return cmd_bench(b_dataset, b_variants, b_reps, b_out);
        if (*in) return cmd_inspect(i_dataset, i_index, i_raster, i_features);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return std::strstr(e.what(), "non-finite") ? kExitNumeric : kExitData;
    }
    return 2;
}
