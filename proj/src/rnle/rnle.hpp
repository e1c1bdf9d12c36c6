#pragma once

#include <string>

namespace liftrisk {

inline constexpr double kLoadConstantKg = 23.0;

enum class Coupling { Good, Fair, Poor };
enum class DurationCategory { UpTo1h, UpTo2h, UpTo8h };

// Exact keeps full double precision through the product. TableParity
// rounds each multiplier to two decimals first, matching how published
// worksheets are filled in by hand.
enum class RoundingMode { Exact, TableParity };

// PaperFlat applies the coupling factor independent of hand height
// (good 1.00, fair 0.95, poor 0.90). NioshStandard upgrades fair
// coupling to 1.00 when V >= 75 cm, as the printed table does.
enum class CouplingMode { PaperFlat, NioshStandard };

struct NioshInput {
  double h_cm = 25.0;     // horizontal hand distance at the hands
  double v_cm = 75.0;     // vertical hand height
  double d_cm = 25.0;     // vertical travel distance
  double a_deg = 0.0;     // asymmetry angle
  double f_per_min = 0.2; // lift frequency
  DurationCategory duration = DurationCategory::UpTo1h;
  Coupling coupling = Coupling::Fair;
  double payload_kg = 0.0;
};

struct NioshResult {
  double hm = 0.0;
  double vm = 0.0;
  double dm = 0.0;
  double am = 0.0;
  double fm = 0.0;
  double cm = 0.0;
  double rwl_kg = 0.0;
  double li = 0.0;
  // Set when the requested frequency fell outside the table range and was
  // clamped to the nearest row.
  bool frequency_clamped = false;
};

double horizontal_multiplier(double h_cm);
double vertical_multiplier(double v_cm);
double distance_multiplier(double d_cm);
double asymmetry_multiplier(double a_deg);
double frequency_multiplier(double f_per_min, DurationCategory duration,
                            double v_cm, bool* clamped = nullptr);
double coupling_multiplier(Coupling coupling, double v_cm, CouplingMode mode);

// Recommended weight limit plus the multipliers that produced it. In
// TableParity mode the stored multipliers are the rounded values that
// entered the product.
NioshResult recommended_weight_limit(const NioshInput& input,
                                     RoundingMode rounding,
                                     CouplingMode coupling_mode);

// payload / RWL. Zero payload gives 0; positive payload over a zero RWL
// gives +infinity.
double lifting_index(double payload_kg, double rwl_kg);

// recommended_weight_limit with li filled in from input.payload_kg.
NioshResult assess_lift(const NioshInput& input, RoundingMode rounding,
                        CouplingMode coupling_mode);

// Embedded frequency and coupling tables as a JSON document, for audit.
std::string rnle_tables_json();

}  // namespace liftrisk
