#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "metrics/metrics.hpp"
#include "synth/generate.hpp"

using namespace liftrisk;
using doctest::Approx;

namespace {

std::vector<SeqData> lift_data(std::uint64_t seed) {
  LiftScript script;
  script.seed = seed;
  Skeleton skeleton;
  return {make_seq_data(generate_lift(script, skeleton))};
}

Eigen::MatrixXd window_at(const SeqData& seq, const GmoeDims& d, int anchor) {
  Eigen::MatrixXd w(d.window, d.input);
  const int span = (d.window - 1) * kFrameSpacing;
  for (int t = 0; t < d.window; ++t) {
    w.row(t) = seq.feat.row(anchor - span + t * kFrameSpacing);
  }
  return w;
}

}  // namespace

TEST_CASE("report scores match hand-computed precision and recall") {
  ConfusionMatrix c;
  c.count = {{{5, 2, 1}, {0, 7, 3}, {2, 0, 4}}};
  const ClassificationReport r = classification_report(c);

  CHECK(c.total() == 24);
  CHECK(r.accuracy == Approx(16.0 / 24.0));

  CHECK(r.per_class[0].precision == Approx(5.0 / 7.0));
  CHECK(r.per_class[0].recall == Approx(5.0 / 8.0));
  CHECK(r.per_class[0].f1 == Approx(10.0 / 15.0));
  CHECK(r.per_class[1].precision == Approx(7.0 / 9.0));
  CHECK(r.per_class[1].recall == Approx(7.0 / 10.0));
  CHECK(r.per_class[1].f1 == Approx(14.0 / 19.0));
  CHECK(r.per_class[2].precision == Approx(4.0 / 8.0));
  CHECK(r.per_class[2].recall == Approx(4.0 / 6.0));
  CHECK(r.per_class[2].f1 == Approx(8.0 / 14.0));

  for (int k = 0; k < 3; ++k) {
    CHECK(r.per_class[k].precision_defined);
    CHECK(r.per_class[k].recall_defined);
    CHECK(r.per_class[k].f1_defined);
  }
  CHECK(r.macro_precision ==
        Approx((5.0 / 7.0 + 7.0 / 9.0 + 4.0 / 8.0) / 3.0));
  CHECK(r.macro_recall == Approx((5.0 / 8.0 + 7.0 / 10.0 + 4.0 / 6.0) / 3.0));
  CHECK(r.macro_f1 == Approx((10.0 / 15.0 + 14.0 / 19.0 + 8.0 / 14.0) / 3.0));
}

TEST_CASE("scores with empty denominators are flagged as undefined") {
  SUBCASE("an empty matrix defines nothing") {
    const ClassificationReport r = classification_report(ConfusionMatrix{});
    CHECK(r.accuracy == 0.0);
    for (int k = 0; k < 3; ++k) {
      CHECK_FALSE(r.per_class[k].precision_defined);
      CHECK_FALSE(r.per_class[k].recall_defined);
      CHECK_FALSE(r.per_class[k].f1_defined);
    }
    CHECK(r.macro_f1 == 0.0);
  }

  SUBCASE("a class can have precision without recall") {
    ConfusionMatrix c;
    c.count = {{{3, 1, 0}, {0, 0, 0}, {0, 0, 0}}};
    const ClassificationReport r = classification_report(c);
    CHECK(r.accuracy == Approx(0.75));

    // Predicted once, never true: precision 0 is meaningful, recall is not.
    CHECK(r.per_class[1].precision_defined);
    CHECK(r.per_class[1].precision == 0.0);
    CHECK_FALSE(r.per_class[1].recall_defined);
    CHECK(r.per_class[1].f1_defined);
    CHECK(r.per_class[1].f1 == 0.0);

    // Never predicted, never true: everything is undefined.
    CHECK_FALSE(r.per_class[2].precision_defined);
    CHECK_FALSE(r.per_class[2].recall_defined);
    CHECK_FALSE(r.per_class[2].f1_defined);
  }
}

TEST_CASE("dataset classification equals a frame-by-frame recount") {
  const std::vector<SeqData> data = lift_data(83);
  GmoeDims dims;
  dims.hidden = 4;
  GmoeModel model = init_gmoe(dims, 29);
  compute_feature_stats(data, model.feat_mean, model.feat_scale);

  const int stride = 15;
  const ConfusionMatrix got = classify_dataset(model, data, stride);

  ConfusionMatrix want;
  const SeqData& seq = data[0];
  const int n = static_cast<int>(seq.feat.rows());
  const int lookahead = dims.horizon * kFrameSpacing;
  for (int a = 27; a + lookahead <= n - 1; a += stride) {
    const MotionPrediction pred = predict(model, window_at(seq, dims, a));
    int best = 0;
    for (int j = 1; j < 3; ++j) {
      if (pred.probs(0, j) > pred.probs(0, best)) best = j;
    }
    want.add(static_cast<ActionLabel>(seq.label[a + kFrameSpacing]),
             static_cast<ActionLabel>(best));
  }

  REQUIRE(want.total() > 30);
  for (int t = 0; t < 3; ++t) {
    for (int p = 0; p < 3; ++p) {
      CHECK(got.count[t][p] == want.count[t][p]);
    }
  }

  // Sequences too short for a full horizon contribute nothing.
  std::vector<SeqData> with_stub = data;
  SeqData stub;
  stub.feat = Eigen::MatrixXd::Zero(50, kFeatureDim);
  stub.label.assign(50, 0);
  with_stub.push_back(stub);
  const ConfusionMatrix again = classify_dataset(model, with_stub, stride);
  CHECK(again.total() == got.total());
}

TEST_CASE("motion error equals a longhand recomputation") {
  const std::vector<SeqData> data = lift_data(101);
  GmoeDims dims;
  dims.hidden = 4;
  GmoeModel model = init_gmoe(dims, 31);
  compute_feature_stats(data, model.feat_mean, model.feat_scale);

  const std::vector<int> steps{0, 4, 49};
  const int stride = 40;
  const MotionErrorReport got = motion_error(model, data, steps, stride);

  REQUIRE(got.steps == steps);
  REQUIRE(got.windows > 10);

  const SeqData& seq = data[0];
  const int n = static_cast<int>(seq.feat.rows());
  const int lookahead = dims.horizon * kFrameSpacing;
  std::vector<double> knee(steps.size(), 0.0), elbow(steps.size(), 0.0),
      all(steps.size(), 0.0);
  std::int64_t windows = 0;
  for (int a = 27; a + lookahead <= n - 1; a += stride) {
    const MotionPrediction pred = predict(model, window_at(seq, dims, a));
    ++windows;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const int target = a + kFrameSpacing * (steps[k] + 1);
      for (int j = 0; j < dims.motion; ++j) {
        const int f = model.motion_map[j];
        const double err = pred.motion(steps[k], j) - seq.feat(target, f);
        const double norm = err / model.feat_scale[f];
        all[k] += norm * norm;
        if (f == kLeftKneePitch) knee[k] += err * err;
        if (f == kRightElbowPitch) elbow[k] += err * err;
      }
    }
  }
  REQUIRE(windows == got.windows);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double m = static_cast<double>(windows);
    CHECK(got.left_knee_rmse_rad[k] ==
          Approx(std::sqrt(knee[k] / m)).epsilon(1e-12));
    CHECK(got.right_elbow_rmse_rad[k] ==
          Approx(std::sqrt(elbow[k] / m)).epsilon(1e-12));
    CHECK(got.overall_rmse_norm[k] ==
          Approx(std::sqrt(all[k] / (m * dims.motion))).epsilon(1e-12));
  }

  CHECK_THROWS_WITH_AS(motion_error(model, data, {50}, stride),
                       "horizon step out of range", std::invalid_argument);
  CHECK_THROWS_WITH_AS(motion_error(model, data, {-1}, stride),
                       "horizon step out of range", std::invalid_argument);

  SUBCASE("short sequences leave an empty report") {
    SeqData stub;
    stub.feat = Eigen::MatrixXd::Zero(60, kFeatureDim);
    stub.label.assign(60, 1);
    const MotionErrorReport empty = motion_error(model, {stub}, steps, 1);
    CHECK(empty.windows == 0);
    CHECK(empty.overall_rmse_norm == std::vector<double>(steps.size(), 0.0));
  }
}
