#pragma once

#include <cstdint>
#include <vector>

#include "synth/generate.hpp"

namespace liftrisk {

struct DatasetSplits {
  std::vector<LabeledSequence> train;
  std::vector<LabeledSequence> val;
  std::vector<LabeledSequence> test;
};

// Generates n_lifts independent lifts with per-lift height, depth, and
// payload drawn from the ranges, then splits them 70/20/10 by whole lifts
// (floor(0.7 n) train, floor(0.2 n) validation, remainder test, assigned
// in generation order). Requires n_lifts >= 10.
DatasetSplits generate_dataset(const LiftScript& base,
                               const ScriptRanges& ranges, int n_lifts,
                               std::uint64_t seed, const Skeleton& skeleton);

struct SplitSizes {
  int train = 0, val = 0, test = 0;
};
SplitSizes split_sizes(int n_lifts);

}  // namespace liftrisk
