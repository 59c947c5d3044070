#include "rafr/features.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rafr {

using dsp::wrap_phase;

CoefficientMatrix goertzel_matrix(const FrameCube& preprocessed, int bin) {
    if (bin < 1 || bin >= preprocessed.n_samples / 2)
        throw std::out_of_range("goertzel_matrix: bin out of range");
    CoefficientMatrix m;
    m.n_antennas = preprocessed.n_antennas;
    m.n_chirps = preprocessed.n_chirps;
    m.data.resize(static_cast<std::size_t>(m.n_antennas) * m.n_chirps);
    for (int a = 0; a < m.n_antennas; ++a)
        for (int c = 0; c < m.n_chirps; ++c)
            m.at(a, c) = dsp::goertzel({preprocessed.chirp(a, c),
                                        static_cast<std::size_t>(preprocessed.n_samples)},
                                       bin);
    return m;
}

double doppler_feature(const CoefficientMatrix& coeffs) {
    if (coeffs.n_chirps < 2) throw std::invalid_argument("doppler_feature: need >= 2 chirps");
    double sum = 0.0;
    int used = 0;
    for (int a = 0; a < coeffs.n_antennas; ++a) {
        const auto g0 = coeffs.at(a, 0);
        const auto g1 = coeffs.at(a, 1);
        if (std::abs(g0) == 0.0 || std::abs(g1) == 0.0) continue;  // phase undefined
        sum += wrap_phase(std::arg(g1) - std::arg(g0));
        ++used;
    }
    return used > 0 ? sum / used : 0.0;
}

std::pair<double, double> angle_features(const CoefficientMatrix& coeffs,
                                         double spacing_wavelengths) {
    if (coeffs.n_antennas != 3) throw std::invalid_argument("angle_features: need 3 antennas");
    double az_sum = 0.0, el_sum = 0.0;
    int az_used = 0, el_used = 0;
    for (int c = 0; c < coeffs.n_chirps; ++c) {
        const auto g0 = coeffs.at(0, c);
        const auto g1 = coeffs.at(1, c);
        const auto g2 = coeffs.at(2, c);
        if (std::abs(g2) != 0.0 && std::abs(g0) != 0.0) {
            az_sum += wrap_phase(std::arg(g2) - std::arg(g0));
            ++az_used;
        }
        if (std::abs(g2) != 0.0 && std::abs(g1) != 0.0) {
            el_sum += wrap_phase(std::arg(g2) - std::arg(g1));
            ++el_used;
        }
    }
    const double dphi_az = az_used > 0 ? az_sum / az_used : 0.0;
    const double dphi_el = el_used > 0 ? el_sum / el_used : 0.0;
    return {dsp::monopulse_angle(dphi_az, spacing_wavelengths),
            dsp::monopulse_angle(dphi_el, spacing_wavelengths)};
}

double rms_amplitude(const CoefficientMatrix& coeffs) {
    if (coeffs.data.empty()) throw std::invalid_argument("rms_amplitude: empty matrix");
    double acc = 0.0;
    for (const auto& g : coeffs.data) acc += std::norm(g);
    return std::sqrt(acc / static_cast<double>(coeffs.data.size()));
}

FeatureVector features_at_bin(const FrameCube& preprocessed, std::optional<int> bin,
                              double spacing_wavelengths) {
    if (!bin) return FeatureVector{};
    const CoefficientMatrix coeffs = goertzel_matrix(preprocessed, *bin);
    FeatureVector fv;
    fv.range_bin = static_cast<double>(*bin);
    fv.doppler_phase = doppler_feature(coeffs);
    std::tie(fv.azimuth, fv.elevation) = angle_features(coeffs, spacing_wavelengths);
    fv.rms_amplitude = rms_amplitude(coeffs);
    return fv;
}

FeatureVector extract_features(const FrameCube& raw_frame, const RafConfig& raf_cfg,
                               const RadarConfig& radar_cfg) {
    if (raw_frame.n_antennas != radar_cfg.n_antennas ||
        raw_frame.n_chirps != radar_cfg.n_chirps || raw_frame.n_samples != radar_cfg.n_samples)
        throw std::invalid_argument("extract_features: frame dimensions mismatch config");
    const FrameCube pp = dsp::preprocess(raw_frame);
    const DetectionResult det = detect_target(pp, raf_cfg);
    return features_at_bin(pp, det.bin, radar_cfg.antenna_spacing_wavelengths);
}

std::optional<int> gesture_frame_from_features(const std::vector<FeatureVector>& per_frame) {
    const std::size_t n = per_frame.size();
    auto has_bin = [&](std::size_t f) { return f < n && per_frame[f].range_bin > 0.0; };
    std::vector<char> corroborated(n, 0);
    bool any = false;
    for (std::size_t f = 0; f < n; ++f) {
        if (has_bin(f) && (has_bin(f - 1) || has_bin(f + 1))) {
            corroborated[f] = 1;
            any = true;
        }
    }
    if (!any)
        for (std::size_t f = 0; f < n; ++f) corroborated[f] = has_bin(f);

    double b_min = 0.0;
    for (std::size_t f = 0; f < n; ++f)
        if (corroborated[f] && (b_min == 0.0 || per_frame[f].range_bin < b_min))
            b_min = per_frame[f].range_bin;
    if (b_min == 0.0) return std::nullopt;
    for (std::size_t f = 0; f < n; ++f)
        if (corroborated[f] && per_frame[f].range_bin == b_min) return static_cast<int>(f);
    return std::nullopt;
}

FeatureScaler fit_scaler(const std::vector<std::array<double, kNumFeatures>>& train_features) {
    const std::size_t n = train_features.size();
    if (n < 2) throw std::invalid_argument("fit_scaler: need at least 2 rows");
    FeatureScaler s;
    for (int f = 0; f < kNumFeatures; ++f) {
        double mean = 0.0;
        for (const auto& row : train_features) mean += row[f];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& row : train_features) {
            const double d = row[f] - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);  // population variance
        s.mean[f] = mean;
        s.std[f] = std::sqrt(var);
    }
    return s;
}

std::array<double, kNumFeatures> apply_scaler(const FeatureScaler& scaler,
                                              const std::array<double, kNumFeatures>& features) {
    std::array<double, kNumFeatures> out{};
    for (int f = 0; f < kNumFeatures; ++f)
        out[f] = (features[f] - scaler.mean[f]) /
                 std::max(scaler.std[f], FeatureScaler::kVarianceFloor);
    return out;
}

void save_scaler(const std::string& path, const FeatureScaler& scaler) {
    nlohmann::json j;
    j["mean"] = scaler.mean;
    j["std"] = scaler.std;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << j.dump(2) << "\n";
}

FeatureScaler load_scaler(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    is >> j;
    FeatureScaler s;
    for (int f = 0; f < kNumFeatures; ++f) {
        s.mean[f] = j.at("mean").at(f).get<double>();
        s.std[f] = j.at("std").at(f).get<double>();
    }
    return s;
}

void write_features_csv(const std::string& path, const std::vector<FeatureRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "recording_id,frame,range_bin,doppler_phase,azimuth,elevation,rms_amplitude,label\n";
    os << std::setprecision(17);
    for (const FeatureRow& r : rows) {
        os << r.recording_id << "," << r.frame << "," << r.features.range_bin << ","
           << r.features.doppler_phase << "," << r.features.azimuth << ","
           << r.features.elevation << "," << r.features.rms_amplitude << ","
           << static_cast<int>(r.label) << "\n";
    }
}

std::vector<FeatureRow> read_features_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("features csv: empty file");
    std::vector<FeatureRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        auto next = [&]() {
            if (!std::getline(ss, cell, ',')) throw std::runtime_error("features csv: bad row");
            return cell;
        };
        FeatureRow r;
        r.recording_id = std::stoi(next());
        r.frame = std::stoi(next());
        r.features.range_bin = std::stod(next());
        r.features.doppler_phase = std::stod(next());
        r.features.azimuth = std::stod(next());
        r.features.elevation = std::stod(next());
        r.features.rms_amplitude = std::stod(next());
        r.label = static_cast<GestureClass>(std::stoi(next()));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace rafr
