#include "rnle/rnle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace liftrisk {

namespace {

// Half-up rounding to two decimals. The small bias keeps values that are
// exactly on a .xx5 boundary in real arithmetic (0.985, 0.895, ...) from
// falling to the lower cent when the nearest double sits just below it.
double round2(double x) {
  return std::floor(x * 100.0 + 0.5 + 1e-7) / 100.0;
}

struct FrequencyRow {
  double f;          // lifts per minute
  double fm[3][2];   // [duration][v < 75 ? 0 : 1]
};

// Standard frequency-multiplier table: rows by lifts/min, columns by work
// duration (<=1 h, <=2 h, <=8 h) and by hand height below/above 75 cm.
constexpr FrequencyRow kFrequencyTable[] = {
    {0.2, {{1.00, 1.00}, {0.95, 0.95}, {0.85, 0.85}}},
    {0.5, {{0.97, 0.97}, {0.92, 0.92}, {0.81, 0.81}}},
    {1.0, {{0.94, 0.94}, {0.88, 0.88}, {0.75, 0.75}}},
    {2.0, {{0.91, 0.91}, {0.84, 0.84}, {0.65, 0.65}}},
    {3.0, {{0.88, 0.88}, {0.79, 0.79}, {0.55, 0.55}}},
    {4.0, {{0.84, 0.84}, {0.72, 0.72}, {0.45, 0.45}}},
    {5.0, {{0.80, 0.80}, {0.60, 0.60}, {0.35, 0.35}}},
    {6.0, {{0.75, 0.75}, {0.50, 0.50}, {0.27, 0.27}}},
    {7.0, {{0.70, 0.70}, {0.42, 0.42}, {0.22, 0.22}}},
    {8.0, {{0.60, 0.60}, {0.35, 0.35}, {0.18, 0.18}}},
    {9.0, {{0.52, 0.52}, {0.30, 0.30}, {0.00, 0.15}}},
    {10.0, {{0.45, 0.45}, {0.26, 0.26}, {0.00, 0.13}}},
    {11.0, {{0.41, 0.41}, {0.00, 0.23}, {0.00, 0.00}}},
    {12.0, {{0.37, 0.37}, {0.00, 0.21}, {0.00, 0.00}}},
    {13.0, {{0.00, 0.34}, {0.00, 0.00}, {0.00, 0.00}}},
    {14.0, {{0.00, 0.31}, {0.00, 0.00}, {0.00, 0.00}}},
    {15.0, {{0.00, 0.28}, {0.00, 0.00}, {0.00, 0.00}}},
};
constexpr int kFrequencyRows =
    static_cast<int>(sizeof(kFrequencyTable) / sizeof(kFrequencyTable[0]));

int duration_column(DurationCategory duration) {
  switch (duration) {
    case DurationCategory::UpTo1h:
      return 0;
    case DurationCategory::UpTo2h:
      return 1;
    case DurationCategory::UpTo8h:
      return 2;
  }
  return 0;
}

const char* duration_name(DurationCategory duration) {
  switch (duration) {
    case DurationCategory::UpTo1h:
      return "up_to_1h";
    case DurationCategory::UpTo2h:
      return "up_to_2h";
    case DurationCategory::UpTo8h:
      return "up_to_8h";
  }
  return "up_to_1h";
}

}  // namespace

double horizontal_multiplier(double h_cm) {
  if (h_cm <= 25.0) return 1.0;
  if (h_cm > 63.0) return 0.0;
  return 25.0 / h_cm;
}

double vertical_multiplier(double v_cm) {
  if (v_cm > 175.0) return 0.0;
  if (v_cm < 0.0) v_cm = 0.0;
  return 1.0 - 0.003 * std::abs(v_cm - 75.0);
}

double distance_multiplier(double d_cm) {
  if (d_cm <= 25.0) return 1.0;
  if (d_cm > 175.0) return 0.0;
  return 0.82 + 4.5 / d_cm;
}

double asymmetry_multiplier(double a_deg) {
  const double a = std::abs(a_deg);
  if (a > 135.0) return 0.0;
  return 1.0 - 0.0032 * a;
}

double frequency_multiplier(double f_per_min, DurationCategory duration,
                            double v_cm, bool* clamped) {
  if (clamped) *clamped = false;
  double f = f_per_min;
  if (f < kFrequencyTable[0].f) {
    if (f < kFrequencyTable[0].f - 1e-9 && clamped) *clamped = true;
    f = kFrequencyTable[0].f;
  }
  if (f > kFrequencyTable[kFrequencyRows - 1].f) {
    if (f > kFrequencyTable[kFrequencyRows - 1].f + 1e-9 && clamped) {
      *clamped = true;
    }
    f = kFrequencyTable[kFrequencyRows - 1].f;
  }
  const int col = duration_column(duration);
  const int vcol = v_cm < 75.0 ? 0 : 1;
  // Off-row frequencies round up to the next row (the conservative choice).
  for (const FrequencyRow& row : kFrequencyTable) {
    if (f <= row.f + 1e-9) return row.fm[col][vcol];
  }
  return kFrequencyTable[kFrequencyRows - 1].fm[col][vcol];
}

double coupling_multiplier(Coupling coupling, double v_cm, CouplingMode mode) {
  switch (coupling) {
    case Coupling::Good:
      return 1.00;
    case Coupling::Fair:
      if (mode == CouplingMode::NioshStandard && v_cm >= 75.0) return 1.00;
      return 0.95;
    case Coupling::Poor:
      return 0.90;
  }
  return 1.00;
}

NioshResult recommended_weight_limit(const NioshInput& input,
                                     RoundingMode rounding,
                                     CouplingMode coupling_mode) {
  NioshResult r;
  r.hm = horizontal_multiplier(input.h_cm);
  r.vm = vertical_multiplier(input.v_cm);
  r.dm = distance_multiplier(input.d_cm);
  r.am = asymmetry_multiplier(input.a_deg);
  r.fm = frequency_multiplier(input.f_per_min, input.duration, input.v_cm,
                              &r.frequency_clamped);
  r.cm = coupling_multiplier(input.coupling, input.v_cm, coupling_mode);
  if (rounding == RoundingMode::TableParity) {
    r.hm = round2(r.hm);
    r.vm = round2(r.vm);
    r.dm = round2(r.dm);
    r.am = round2(r.am);
    r.fm = round2(r.fm);
    r.cm = round2(r.cm);
  }
  r.rwl_kg = kLoadConstantKg * r.hm * r.vm * r.dm * r.am * r.fm * r.cm;
  return r;
}

double lifting_index(double payload_kg, double rwl_kg) {
  if (payload_kg <= 0.0) return 0.0;
  if (rwl_kg <= 0.0) return std::numeric_limits<double>::infinity();
  return payload_kg / rwl_kg;
}

NioshResult assess_lift(const NioshInput& input, RoundingMode rounding,
                        CouplingMode coupling_mode) {
  NioshResult r = recommended_weight_limit(input, rounding, coupling_mode);
  r.li = lifting_index(input.payload_kg, r.rwl_kg);
  return r;
}

std::string rnle_tables_json() {
  std::ostringstream out;
  out << "{\"load_constant_kg\":23.0,\"frequency_multiplier\":[";
  for (int i = 0; i < kFrequencyRows; ++i) {
    const FrequencyRow& row = kFrequencyTable[i];
    if (i) out << ",";
    out << "{\"lifts_per_min\":" << row.f;
    for (int d = 0; d < 3; ++d) {
      const DurationCategory dur = static_cast<DurationCategory>(d);
      out << ",\"" << duration_name(dur) << "\":[" << row.fm[d][0] << ","
          << row.fm[d][1] << "]";
    }
    out << "}";
  }
  out << "],\"frequency_columns\":[\"v_below_75cm\",\"v_at_or_above_75cm\"],";
  out << "\"coupling_multiplier\":{"
         "\"paper_flat\":{\"good\":1.0,\"fair\":0.95,\"poor\":0.9},"
         "\"niosh_standard\":{\"good\":[1.0,1.0],\"fair\":[0.95,1.0],"
         "\"poor\":[0.9,0.9]}}}";
  return out.str();
}

}  // namespace liftrisk
