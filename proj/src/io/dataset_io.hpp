#pragma once

#include <string>
#include <vector>

#include "kinematics/skeleton.hpp"
#include "synth/dataset.hpp"

namespace liftrisk {

// Layout under `dir`:
//   manifest.ndjson          header line + one line per lift
//   lifts/lift_0000.ndjson   one frame per line, in lift order
void write_dataset(const DatasetSplits& splits, const std::string& dir);

// Reads a directory written by write_dataset. Geometry is recomputed
// from the stored joint angles when a skeleton is supplied; otherwise
// the geometry vectors stay empty.
DatasetSplits load_dataset(const std::string& dir,
                           const Skeleton* skeleton = nullptr);

void write_sequence(const LabeledSequence& seq, const std::string& path);
std::vector<StateFrame> load_frames(const std::string& path);

}  // namespace liftrisk
