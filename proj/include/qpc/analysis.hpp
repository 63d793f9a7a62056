#ifndef QPC_ANALYSIS_HPP
#define QPC_ANALYSIS_HPP

// Fidelity grids as data, and the run configuration shared by the CLI.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpc/adversary.hpp"
#include "qpc/noise.hpp"

namespace qpc {

struct GridRow {
  double p1 = 0.0;
  double p2 = 0.0;
  NoiseKind first = NoiseKind::AmplitudeDamping;
  NoiseKind second = NoiseKind::AmplitudeDamping;
  BellState initial = BellState::PsiPlus;
  Trips trips = Trips::OneWay;
  double closed_form = 0.0;
  double oracle = 0.0;
  double abs_deviation = 0.0;

  std::string family_name() const;  // e.g. "oneway/ad-dc"
  friend bool operator==(const GridRow&, const GridRow&) = default;
};

struct GridRequest {
  double step = 0.05;
  std::vector<Trips> trips = {Trips::OneWay, Trips::RoundTrip};
  std::vector<std::pair<NoiseKind, NoiseKind>> kind_pairs;  // empty: all 16 ordered pairs
  FormulaEdition edition = FormulaEdition::Printed;
};

/// Rows ordered by p1, then p2, then trips, kind pair and Bell state.
std::vector<GridRow> fidelity_grid(const GridRequest& request);

/// Families (by name) with at least one row at or above the tolerance.
std::vector<std::string> failing_families(const std::vector<GridRow>& rows, double tolerance = kFormulaTolerance);

std::string grid_to_csv(const std::vector<GridRow>& rows);
std::vector<GridRow> grid_from_csv(const std::string& text);

/// "ad-bf" -> (AD, BF).
std::pair<NoiseKind, NoiseKind> kind_pair_from_string(std::string_view tag);
std::string to_string(std::pair<NoiseKind, NoiseKind> pair);

enum class OutputFormat { Csv, Log };

struct RunConfig {
  Protocol protocol = Protocol::Osb;
  std::size_t n = 8;
  std::vector<std::uint64_t> n_list;  // efficiency command only
  std::uint64_t seed = 1;
  std::optional<std::string> ma;
  std::optional<std::string> mb;
  std::optional<ArmNoise> noise_a;
  std::optional<ArmNoise> noise_b;
  std::optional<Trips> trips;
  AttackStrategy attack;
  double tolerance = 0.0;
  double check_fraction = 0.5;
  std::size_t trials = 1000;
  double step = 0.05;
  std::vector<std::pair<NoiseKind, NoiseKind>> kinds;
  FormulaEdition edition = FormulaEdition::Printed;
  unsigned threads = 1;
  std::string out;
  std::optional<OutputFormat> format;  // run defaults to log, the rest to csv
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sets one field from its textual form. Keys match the long flag names
/// (protocol, n, seed, ma, mb, noise-a, noise-b, trips, attack, tolerance,
/// check-fraction, trials, step, kinds, edition, threads, out, format).
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// key=value lines; blank lines and lines starting with '#' are ignored.
/// Errors name the line.
void apply_config_text(RunConfig& config, const std::string& text, const std::string& source = "config");

}  // namespace qpc

#endif  // QPC_ANALYSIS_HPP
