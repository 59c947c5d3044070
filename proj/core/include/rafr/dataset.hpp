#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rafr/radar.hpp"

namespace rafr {

/// Which split a recording belongs to. Ratios follow the usual 58/17/25
/// train/validation/test partition, stratified per class.
enum class Split : std::uint8_t { Train = 0, Val = 1, Test = 2 };

const char* split_name(Split s);

/// Assign splits per class: for each class, the first 58% of its
/// recordings go to train, the next 17% to validation, the rest to test.
std::vector<Split> assign_splits(const std::vector<GestureClass>& labels);

/// Binary "RAFD" container holding a list of recordings.
void write_dataset(const std::string& path, const std::vector<Recording>& recordings);
std::vector<Recording> read_dataset(const std::string& path);

void write_split_csv(const std::string& path, const std::vector<Split>& splits);
std::vector<Split> read_split_csv(const std::string& path);

}  // namespace rafr
