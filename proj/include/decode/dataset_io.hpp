#pragma once

#include "decode/scene_gen.hpp"

#include <string>
#include <vector>

namespace decode::scenes {

// Dataset file layout: a JSON header line ("magic": "DECODE-DS", "version",
// "t_past", "t_future", "n_neighbors", "dt", "scene_count", "train_count"),
// then per scene a JSON metadata line (id, tag, mask) followed by a raw block
// of little-endian float64: past, future, then neighbor tracks. The header is
// readable with any text tool; the payload round-trips bit-exactly.
struct DatasetFile {
  GeneratorConfig config;
  int train_count = 0;  // leading scenes intended for training, rest for validation
  std::vector<Scene> scenes;
};

inline constexpr int kDatasetFormatVersion = 1;
inline constexpr const char* kDatasetMagic = "DECODE-DS";

void write_dataset(const std::string& path, const std::vector<Scene>& scenes,
                   const GeneratorConfig& cfg, int train_count = 0);

// Throws std::runtime_error naming the failing record index and byte offset
// on malformed or truncated input.
DatasetFile read_dataset(const std::string& path);

}  // namespace decode::scenes
