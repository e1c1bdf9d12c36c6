#include "synth/dataset.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace liftrisk {

SplitSizes split_sizes(int n_lifts) {
  SplitSizes s;
  s.train = static_cast<int>(std::floor(0.7 * n_lifts));
  s.val = static_cast<int>(std::floor(0.2 * n_lifts));
  s.test = n_lifts - s.train - s.val;
  return s;
}

DatasetSplits generate_dataset(const LiftScript& base,
                               const ScriptRanges& ranges, int n_lifts,
                               std::uint64_t seed, const Skeleton& skeleton) {
  if (n_lifts < 10) {
    throw std::invalid_argument("dataset needs at least 10 lifts");
  }
  if (ranges.lift_height_min_cm > ranges.lift_height_max_cm ||
      ranges.squat_depth_min_rad > ranges.squat_depth_max_rad ||
      ranges.payload_min_kg > ranges.payload_max_kg) {
    throw std::invalid_argument("empty sampling range");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> height(ranges.lift_height_min_cm,
                                                ranges.lift_height_max_cm);
  std::uniform_real_distribution<double> depth(ranges.squat_depth_min_rad,
                                               ranges.squat_depth_max_rad);
  std::uniform_real_distribution<double> payload(ranges.payload_min_kg,
                                                 ranges.payload_max_kg);

  const SplitSizes sizes = split_sizes(n_lifts);
  DatasetSplits splits;
  splits.train.reserve(sizes.train);
  splits.val.reserve(sizes.val);
  splits.test.reserve(sizes.test);

  for (int i = 0; i < n_lifts; ++i) {
    LiftScript script = base;
    script.lift_height_cm = height(rng);
    script.squat_depth_rad = depth(rng);
    script.payload_kg = payload(rng);
    script.seed = rng();
    LabeledSequence lift = generate_lift(script, skeleton);
    if (i < sizes.train) {
      splits.train.push_back(std::move(lift));
    } else if (i < sizes.train + sizes.val) {
      splits.val.push_back(std::move(lift));
    } else {
      splits.test.push_back(std::move(lift));
    }
  }
  return splits;
}

}  // namespace liftrisk
