#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rafr/dataset.hpp"
#include "rafr/features.hpp"
#include "rafr/simulate.hpp"

using namespace rafr;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("RAFD container round trip") {
    RadarConfig cfg;
    cfg.n_frames = 4;  // keep the file small
    TrajectoryParams params;
    params.gesture_frames = 2;
    std::vector<Recording> recs;
    recs.push_back(synth_gesture_recording(cfg, GestureClass::Background, params, 1));
    recs.push_back(synth_gesture_recording(cfg, GestureClass::Push, params, 2));

    const std::string path = temp_path("rafr_test_roundtrip.rafd");
    write_dataset(path, recs);
    const auto loaded = read_dataset(path);
    REQUIRE(loaded.size() == recs.size());
    for (std::size_t r = 0; r < recs.size(); ++r) {
        CHECK(loaded[r].label == recs[r].label);
        REQUIRE(loaded[r].frames.size() == recs[r].frames.size());
        for (std::size_t f = 0; f < recs[r].frames.size(); ++f)
            for (std::size_t i = 0; i < recs[r].frames[f].data.size(); ++i)
                CHECK(loaded[r].frames[f].data[i] ==
                      doctest::Approx(recs[r].frames[f].data[i]).epsilon(1e-6));
        REQUIRE(loaded[r].ground_truth.size() == recs[r].ground_truth.size());
    }

    // write -> read -> write must be byte identical
    const std::string path2 = temp_path("rafr_test_roundtrip2.rafd");
    write_dataset(path2, loaded);
    CHECK(slurp(path) == slurp(path2));
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("read_dataset rejects garbage") {
    const std::string path = temp_path("rafr_test_bad.rafd");
    std::ofstream(path) << "not a dataset";
    CHECK_THROWS(read_dataset(path));
    std::remove(path.c_str());
}

TEST_CASE("split assignment follows the 58/17/25 ratios per class") {
    std::vector<GestureClass> labels;
    for (int cls = 0; cls < kNumClasses; ++cls)
        for (int i = 0; i < 100; ++i) labels.push_back(static_cast<GestureClass>(cls));
    const auto splits = assign_splits(labels);
    int n_train = 0, n_val = 0, n_test = 0;
    for (Split s : splits) {
        n_train += (s == Split::Train);
        n_val += (s == Split::Val);
        n_test += (s == Split::Test);
    }
    CHECK(n_train == 348);
    CHECK(n_val == 102);
    CHECK(n_test == 150);
}

TEST_CASE("split csv round trip") {
    const std::vector<Split> splits{Split::Train, Split::Val, Split::Test, Split::Train};
    const std::string path = temp_path("rafr_test_splits.csv");
    write_split_csv(path, splits);
    CHECK(read_split_csv(path) == splits);
    std::remove(path.c_str());
}

TEST_CASE("feature csv round trip preserves values") {
    std::vector<FeatureRow> rows;
    FeatureRow r;
    r.recording_id = 3;
    r.frame = 17;
    r.features = {10.0, 0.123456789012345, -0.5, 0.25, 1.75};
    r.label = GestureClass::SwipeUp;
    rows.push_back(r);
    const std::string path = temp_path("rafr_test_features.csv");
    write_features_csv(path, rows);
    const auto loaded = read_features_csv(path);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].recording_id == 3);
    CHECK(loaded[0].frame == 17);
    CHECK(loaded[0].features.doppler_phase == doctest::Approx(0.123456789012345).epsilon(1e-15));
    CHECK(loaded[0].label == GestureClass::SwipeUp);
    std::remove(path.c_str());
}
