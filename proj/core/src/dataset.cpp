#include "rafr/dataset.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rafr {

namespace {

constexpr std::array<char, 4> kMagic = {'R', 'A', 'F', 'D'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("RAFD: truncated file");
    return v;
}

}  // namespace

const char* split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "unknown";
}

std::vector<Split> assign_splits(const std::vector<GestureClass>& labels) {
    std::vector<Split> splits(labels.size(), Split::Test);
    for (int cls = 0; cls < kNumClasses; ++cls) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (static_cast<int>(labels[i]) == cls) idx.push_back(i);
        const std::size_t n = idx.size();
        const std::size_t n_train = static_cast<std::size_t>(std::lround(0.58 * n));
        const std::size_t n_val = static_cast<std::size_t>(std::lround(0.17 * n));
        for (std::size_t j = 0; j < n; ++j) {
            if (j < n_train)
                splits[idx[j]] = Split::Train;
            else if (j < n_train + n_val)
                splits[idx[j]] = Split::Val;
            else
                splits[idx[j]] = Split::Test;
        }
    }
    return splits;
}

void write_dataset(const std::string& path, const std::vector<Recording>& recordings) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write(kMagic.data(), 4);
    put<std::uint16_t>(os, kVersion);
    put<std::uint16_t>(os, 0);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(recordings.size()));

    for (const Recording& rec : recordings) {
        if (rec.frames.empty()) throw std::runtime_error("RAFD: empty recording");
        const FrameCube& f0 = rec.frames.front();
        put<std::uint8_t>(os, static_cast<std::uint8_t>(rec.label));
        put<std::uint8_t>(os, static_cast<std::uint8_t>(f0.n_antennas));
        put<std::uint8_t>(os, 0);
        put<std::uint8_t>(os, 0);
        put<std::uint16_t>(os, static_cast<std::uint16_t>(rec.frames.size()));
        put<std::uint16_t>(os, static_cast<std::uint16_t>(f0.n_chirps));
        put<std::uint16_t>(os, static_cast<std::uint16_t>(f0.n_samples));
        put<std::uint16_t>(os, 0);
        // [antenna][frame][chirp][sample]
        for (int a = 0; a < f0.n_antennas; ++a)
            for (const FrameCube& fr : rec.frames)
                for (int c = 0; c < f0.n_chirps; ++c)
                    for (int n = 0; n < f0.n_samples; ++n)
                        put<float>(os, static_cast<float>(fr.at(a, c, n)));
        put<std::uint8_t>(os, rec.has_ground_truth() ? 1 : 0);
        if (rec.has_ground_truth()) {
            if (rec.ground_truth.size() != rec.frames.size())
                throw std::runtime_error("RAFD: ground truth length mismatch");
            for (const TargetState& t : rec.ground_truth) {
                put<float>(os, static_cast<float>(t.range));
                put<float>(os, static_cast<float>(t.radial_velocity));
                put<float>(os, static_cast<float>(t.azimuth));
                put<float>(os, static_cast<float>(t.elevation));
                put<float>(os, static_cast<float>(t.amplitude));
            }
        }
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<Recording> read_dataset(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::array<char, 4> magic{};
    is.read(magic.data(), 4);
    if (!is || magic != kMagic) throw std::runtime_error("RAFD: bad magic in " + path);
    if (get<std::uint16_t>(is) != kVersion) throw std::runtime_error("RAFD: unsupported version");
    get<std::uint16_t>(is);  // reserved
    const std::uint32_t count = get<std::uint32_t>(is);

    std::vector<Recording> out;
    out.reserve(count);
    for (std::uint32_t r = 0; r < count; ++r) {
        Recording rec;
        rec.label = static_cast<GestureClass>(get<std::uint8_t>(is));
        const int na = get<std::uint8_t>(is);
        get<std::uint8_t>(is);
        get<std::uint8_t>(is);
        const int nf = get<std::uint16_t>(is);
        const int nc = get<std::uint16_t>(is);
        const int ns = get<std::uint16_t>(is);
        get<std::uint16_t>(is);
        rec.frames.assign(nf, FrameCube(na, nc, ns));
        for (int a = 0; a < na; ++a)
            for (int f = 0; f < nf; ++f)
                for (int c = 0; c < nc; ++c)
                    for (int n = 0; n < ns; ++n)
                        rec.frames[f].at(a, c, n) = get<float>(is);
        if (get<std::uint8_t>(is) != 0) {
            rec.ground_truth.resize(nf);
            for (TargetState& t : rec.ground_truth) {
                t.range = get<float>(is);
                t.radial_velocity = get<float>(is);
                t.azimuth = get<float>(is);
                t.elevation = get<float>(is);
                t.amplitude = get<float>(is);
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void write_split_csv(const std::string& path, const std::vector<Split>& splits) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "recording_id,split\n";
    for (std::size_t i = 0; i < splits.size(); ++i)
        os << i << "," << split_name(splits[i]) << "\n";
}

std::vector<Split> read_split_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::getline(is, line);  // header
    std::vector<Split> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("split csv: bad row");
        const std::string name = line.substr(comma + 1);
        if (name == "train")
            out.push_back(Split::Train);
        else if (name == "val")
            out.push_back(Split::Val);
        else if (name == "test")
            out.push_back(Split::Test);
        else
            throw std::runtime_error("split csv: unknown split " + name);
    }
    return out;
}

}  // namespace rafr
