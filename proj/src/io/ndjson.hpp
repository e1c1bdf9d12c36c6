#pragma once

#include <string>

#include "core/frame.hpp"
#include "engine/engine.hpp"
#include "gmoe/train.hpp"
#include "metrics/metrics.hpp"

namespace liftrisk {

// One frame per line:
//   {"t":1.23,"q":[31 numbers],"dq":[31],"w":[12],"label":"rising"}
// The label field is optional in both directions.
std::string frame_to_json(const StateFrame& frame);

// Throws std::runtime_error naming the problem ("feature count",
// "non-finite value", "malformed frame line ...").
StateFrame frame_from_json(const std::string& line);

// Timestamp of a frame line without building the whole frame.
double frame_time_from_json(const std::string& line);

// Engine output record, one line per processed frame.
std::string record_to_json(const EngineRecord& record);

// Emitted in place of a record when an input frame was skipped.
std::string warning_to_json(double t, const std::string& reason);

std::string epoch_to_json(const EpochStats& stats);
std::string train_report_to_json(const TrainReport& report);
std::string eval_report_to_json(const ClassificationReport& classification,
                                const MotionErrorReport& motion);

}  // namespace liftrisk
