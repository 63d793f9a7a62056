#include "qpc/noise.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace qpc {

std::string_view to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::AmplitudeDamping: return "ad";
    case NoiseKind::BitFlip: return "bf";
    case NoiseKind::PhaseFlip: return "pf";
    case NoiseKind::Depolarizing: return "dc";
  }
  return "?";
}

NoiseKind noise_kind_from_string(std::string_view tag) {
  for (NoiseKind k : kAllNoiseKinds) {
    if (to_string(k) == tag) return k;
  }
  throw std::invalid_argument("unknown noise kind '" + std::string(tag) + "' (expected ad, bf, pf or dc)");
}

std::string_view to_string(Trips t) { return t == Trips::OneWay ? "oneway" : "roundtrip"; }

Trips trips_from_string(std::string_view tag) {
  if (tag == "oneway") return Trips::OneWay;
  if (tag == "roundtrip") return Trips::RoundTrip;
  throw std::invalid_argument("unknown trip mode '" + std::string(tag) + "' (expected oneway or roundtrip)");
}

ArmNoise arm_noise_from_string(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("noise must be written kind:p, got '" + std::string(spec) + "'");
  }
  ArmNoise out{noise_kind_from_string(spec.substr(0, colon)), 0.0};
  const std::string_view num = spec.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), out.p);
  if (ec != std::errc() || ptr != num.data() + num.size() || !(out.p >= 0.0 && out.p <= 1.0)) {
    throw std::invalid_argument("noise probability must be a number in [0, 1], got '" + std::string(num) + "'");
  }
  return out;
}

std::string to_string(const ArmNoise& n) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, n.p);
  return std::string(to_string(n.kind)) + ":" + std::string(buf, res.ptr);
}

std::string_view to_string(FormulaEdition e) {
  return e == FormulaEdition::Printed ? "printed" : "kraus-consistent";
}

FormulaEdition formula_edition_from_string(std::string_view tag) {
  if (tag == "printed") return FormulaEdition::Printed;
  if (tag == "kraus-consistent" || tag == "kraus") return FormulaEdition::KrausConsistent;
  throw std::invalid_argument("unknown formula edition '" + std::string(tag) + "'");
}

std::string_view to_string(FormulaFamily f) {
  switch (f) {
    case FormulaFamily::AdAdPsi: return "ad-ad/psi";
    case FormulaFamily::AdAdPhi: return "ad-ad/phi";
    case FormulaFamily::AdBf: return "ad-bf";
    case FormulaFamily::AdPf: return "ad-pf";
    case FormulaFamily::AdDc: return "ad-dc";
    case FormulaFamily::BfBf: return "bf-bf";
    case FormulaFamily::BfPf: return "bf-pf";
    case FormulaFamily::BfDc: return "bf-dc";
    case FormulaFamily::PfDc: return "pf-dc";
    case FormulaFamily::DcDc: return "dc-dc";
    case FormulaFamily::PfPf: return "pf-pf";
  }
  return "?";
}

namespace {

using K = NoiseKind;

// Canonical pairs only; mirrored pairs are resolved by swapping.
struct DispatchRow {
  NoiseKind first;
  NoiseKind second;
  int parity;  // -1: any initial state
  FormulaFamily family;
};

constexpr std::array<DispatchRow, 11> kDispatchTable = {{
    {K::AmplitudeDamping, K::AmplitudeDamping, 0, FormulaFamily::AdAdPsi},
    {K::AmplitudeDamping, K::AmplitudeDamping, 1, FormulaFamily::AdAdPhi},
    {K::AmplitudeDamping, K::BitFlip, -1, FormulaFamily::AdBf},
    {K::AmplitudeDamping, K::PhaseFlip, -1, FormulaFamily::AdPf},
    {K::AmplitudeDamping, K::Depolarizing, -1, FormulaFamily::AdDc},
    {K::BitFlip, K::BitFlip, -1, FormulaFamily::BfBf},
    {K::BitFlip, K::PhaseFlip, -1, FormulaFamily::BfPf},
    {K::BitFlip, K::Depolarizing, -1, FormulaFamily::BfDc},
    {K::PhaseFlip, K::PhaseFlip, -1, FormulaFamily::PfPf},
    {K::PhaseFlip, K::Depolarizing, -1, FormulaFamily::PfDc},
    {K::Depolarizing, K::Depolarizing, -1, FormulaFamily::DcDc},
}};

double sq(double x) { return x * x; }

double printed_oneway(FormulaFamily f, double p1, double p2) {
  const double a = std::sqrt(1.0 - p1);
  switch (f) {
    case FormulaFamily::AdAdPsi:
      return (2.0 + 2.0 * std::sqrt((1.0 - p1) * (1.0 - p2)) - (p1 + p2) + 2.0 * p1 * p2) / 4.0;
    case FormulaFamily::AdAdPhi:
      return sq(a + std::sqrt(1.0 - p2)) / 4.0;
    case FormulaFamily::AdBf:
      return (-2.0 * (1.0 + a) * (p2 - 1.0) + p1 * (2.0 * p2 - 1.0)) / 4.0;
    case FormulaFamily::AdPf:
      return (2.0 + 2.0 * a - p1 - 4.0 * a * p2) / 4.0;
    case FormulaFamily::AdDc:
      return (-2.0 * p1 * (p2 - 1.0) + (1.0 + a) * (3.0 * p2 - 4.0)) / (4.0 * (p2 - 2.0));
    case FormulaFamily::BfBf:
    case FormulaFamily::PfPf:
      return 1.0 - p2 + p1 * (2.0 * p2 - 1.0);
    case FormulaFamily::BfPf:
      return (p1 - 1.0) * (p2 - 1.0);
    case FormulaFamily::BfDc:
      return 1.5 - 2.0 * p1 + (1.0 - 2.0 * p1) / (p2 - 2.0);
    case FormulaFamily::PfDc:
      return (p1 - 1.0) * (3.0 * p2 - 4.0) / (2.0 * (2.0 - p2));
    case FormulaFamily::DcDc:
      return (8.0 - 6.0 * p2 + p1 * (5.0 * p2 - 6.0)) / (2.0 * (p1 - 2.0) * (p2 - 2.0));
  }
  return 0.0;
}

double printed_roundtrip(FormulaFamily f, double p1, double p2) {
  switch (f) {
    case FormulaFamily::AdAdPsi:
      return (sq(p2 - 2.0) - 2.0 * p1 * (p2 - 2.0) * (2.0 * p2 - 1.0) +
              sq(p1) * (1.0 + 2.0 * (p2 - 2.0) * p2)) /
             4.0;
    case FormulaFamily::AdAdPhi:
      return sq(p1 + p2 - 2.0) / 4.0;
    case FormulaFamily::AdBf:
      return (p1 - 2.0) * (-2.0 + p1 * sq(1.0 - 2.0 * p2) - 4.0 * (p2 - 1.0) * p2) / 4.0;
    case FormulaFamily::AdPf:
      return (sq(p1 - 2.0) + 8.0 * (p1 - 1.0) * p2 - 8.0 * (p1 - 1.0) * sq(p2)) / 4.0;
    case FormulaFamily::AdDc:
      return (p1 - 2.0) * (-8.0 + 4.0 * p1 * sq(p2 - 1.0) + (12.0 - 5.0 * p2) * p2) /
             (4.0 * sq(p2 - 2.0));
    case FormulaFamily::BfBf:
    case FormulaFamily::PfPf:
      return 1.0 - 2.0 * p1 * sq(1.0 - 2.0 * p2) + 2.0 * sq(p1) * sq(1.0 - 2.0 * p2) +
             2.0 * (p2 - 1.0) * p2;
    case FormulaFamily::BfPf:
      return -(1.0 + 2.0 * (p1 - 1.0) * p1) * (1.0 + 2.0 * (p2 - 1.0) * p2) /
             (-1.0 + sq(p1 - 1.0) * (p2 - 1.0) * p2);
    case FormulaFamily::BfDc:
      return (8.0 - 16.0 * p1 * sq(p2 - 1.0) + 16.0 * sq(p1) * sq(p2 - 1.0) + p2 * (5.0 * p2 - 12.0)) /
             (2.0 * sq(p2 - 2.0));
    case FormulaFamily::PfDc:
      return (1.0 + 2.0 * (p1 - 1.0) * p1) * (8.0 + p2 * (5.0 * p2 - 12.0)) / (2.0 * sq(p2 - 2.0));
    case FormulaFamily::DcDc:
      return (4.0 * (8.0 + p2 * (5.0 * p2 - 12.0)) - 4.0 * p1 * (12.0 + p2 * (9.0 * p2 - 20.0)) +
              sq(p1) * (20.0 + p2 * (17.0 * p2 - 36.0))) /
             (2.0 * sq(p1 - 2.0) * sq(p2 - 2.0));
  }
  return 0.0;
}

// Pauli-channel weights over (I, X, Y, Z).
std::array<double, 4> pauli_weights(NoiseKind k, double p) {
  switch (k) {
    case NoiseKind::BitFlip: return {1.0 - p, p, 0.0, 0.0};
    case NoiseKind::PhaseFlip: return {1.0 - p, 0.0, 0.0, p};
    case NoiseKind::Depolarizing: return {1.0 - p, p / 3.0, p / 3.0, p / 3.0};
    case NoiseKind::AmplitudeDamping: break;
  }
  throw std::logic_error("pauli_weights: amplitude damping is not a Pauli channel");
}

NoiseKind first_kind(FormulaFamily f) {
  for (const auto& row : kDispatchTable) {
    if (row.family == f) return row.first;
  }
  throw std::logic_error("unknown formula family");
}

NoiseKind second_kind(FormulaFamily f) {
  for (const auto& row : kDispatchTable) {
    if (row.family == f) return row.second;
  }
  throw std::logic_error("unknown formula family");
}

// Bell-state fidelity after independent one-way channels. Pauli pairs keep a
// Bell state fixed exactly when both qubits see the same Pauli; damping on the
// first qubit contributes |tr(E_i P^T)/2|^2 per Pauli P on the second.
double kraus_consistent_oneway(FormulaFamily f, double p1, double p2) {
  switch (f) {
    case FormulaFamily::AdAdPsi:
    case FormulaFamily::AdAdPhi:
      return printed_oneway(f, p1, p2);
    default:
      break;
  }
  const NoiseKind k1 = first_kind(f);
  const NoiseKind k2 = second_kind(f);
  const auto w2 = pauli_weights(k2, p2);
  if (k1 == NoiseKind::AmplitudeDamping) {
    const double a = std::sqrt(1.0 - p1);
    return w2[0] * sq(1.0 + a) / 4.0 + (w2[1] + w2[2]) * p1 / 4.0 + w2[3] * sq(1.0 - a) / 4.0;
  }
  const auto w1 = pauli_weights(k1, p1);
  return w1[0] * w2[0] + w1[1] * w2[1] + w1[2] * w2[2] + w1[3] * w2[3];
}

// Applying the same channel twice is again a channel of the same kind.
double composed_parameter(NoiseKind k, double p) {
  switch (k) {
    case NoiseKind::AmplitudeDamping: return 1.0 - sq(1.0 - p);
    case NoiseKind::BitFlip:
    case NoiseKind::PhaseFlip: return 2.0 * p * (1.0 - p);
    case NoiseKind::Depolarizing: return 2.0 * p - 4.0 * sq(p) / 3.0;
  }
  return p;
}

}  // namespace

FormulaDispatch dispatch_formula(NoiseKind first, NoiseKind second, BellState initial) {
  const bool swapped = static_cast<int>(first) > static_cast<int>(second);
  const NoiseKind a = swapped ? second : first;
  const NoiseKind b = swapped ? first : second;
  for (const auto& row : kDispatchTable) {
    if (row.first == a && row.second == b && (row.parity < 0 || row.parity == parity(initial))) {
      return {row.family, swapped};
    }
  }
  throw std::logic_error("dispatch_formula: no formula for kind pair");
}

std::vector<std::pair<NoiseKind, NoiseKind>> kind_pairs_for(FormulaFamily family) {
  std::vector<std::pair<NoiseKind, NoiseKind>> out;
  for (NoiseKind a : kAllNoiseKinds) {
    for (NoiseKind b : kAllNoiseKinds) {
      const int want_parity = family == FormulaFamily::AdAdPhi ? 1 : 0;
      const BellState probe = want_parity ? BellState::PhiPlus : BellState::PsiPlus;
      if (dispatch_formula(a, b, probe).family == family) out.emplace_back(a, b);
    }
  }
  return out;
}

double evaluate_family(FormulaFamily family, Trips trips, double p1, double p2, FormulaEdition edition) {
  if (edition == FormulaEdition::Printed) {
    return trips == Trips::OneWay ? printed_oneway(family, p1, p2) : printed_roundtrip(family, p1, p2);
  }
  if (trips == Trips::OneWay) return kraus_consistent_oneway(family, p1, p2);
  return kraus_consistent_oneway(family, composed_parameter(first_kind(family), p1),
                                 composed_parameter(second_kind(family), p2));
}

namespace {

double closed_form_impl(const NoiseScenario& s, Trips trips, FormulaEdition edition) {
  const FormulaDispatch d = dispatch_formula(s.first.kind, s.second.kind, s.initial);
  const double p1 = d.swapped ? s.second.p : s.first.p;
  const double p2 = d.swapped ? s.first.p : s.second.p;
  return evaluate_family(d.family, trips, p1, p2, edition);
}

}  // namespace

double closed_form_oneway(const NoiseScenario& s, FormulaEdition edition) {
  if (s.trips != Trips::OneWay) throw std::invalid_argument("closed_form_oneway: scenario is round-trip");
  return closed_form_impl(s, Trips::OneWay, edition);
}

double closed_form_roundtrip(const NoiseScenario& s, FormulaEdition edition) {
  if (s.trips != Trips::RoundTrip) throw std::invalid_argument("closed_form_roundtrip: scenario is one-way");
  return closed_form_impl(s, Trips::RoundTrip, edition);
}

double closed_form(const NoiseScenario& s, FormulaEdition edition) {
  return closed_form_impl(s, s.trips, edition);
}

std::string FormulaCheck::name() const {
  std::string out(to_string(trips));
  out += '/';
  out += to_string(family);
  if (family == FormulaFamily::PfPf) out += "(=bf-bf)";
  return out;
}

bool FormulaReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const FormulaCheck& c) { return c.passed(); });
}

std::vector<const FormulaCheck*> FormulaReport::failures() const {
  std::vector<const FormulaCheck*> out;
  for (const auto& c : checks) {
    if (!c.passed()) out.push_back(&c);
  }
  return out;
}

std::vector<double> probability_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("grid step must lie in (0, 1]");
  const double count = std::round(1.0 / step);
  if (std::abs(count * step - 1.0) > 1e-9) throw std::invalid_argument("grid step must divide 1");
  const auto n = static_cast<std::size_t>(count);
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(n);
  return grid;
}

FormulaReport verify_all_formulas(double grid_step, FormulaEdition edition) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw std::invalid_argument("verify_all_formulas: grid step must lie in (0, 0.5]");
  }
  const std::vector<double> grid = probability_grid(grid_step);
  FormulaReport report{grid_step, edition, {}};
  for (Trips trips : {Trips::OneWay, Trips::RoundTrip}) {
    for (FormulaFamily family : kAllFormulaFamilies) {
      FormulaCheck check{family, trips};
      for (const auto& [ka, kb] : kind_pairs_for(family)) {
        for (BellState state : kAllBellStates) {
          if (dispatch_formula(ka, kb, state).family != family) continue;
          for (double p1 : grid) {
            for (double p2 : grid) {
              const NoiseScenario s{{ka, p1}, {kb, p2}, state, trips};
              const double dev = std::abs(closed_form(s, edition) - oracle_fidelity(s));
              ++check.points;
              if (dev > check.max_deviation || std::isnan(dev)) {
                check.max_deviation = std::isnan(dev) ? INFINITY : dev;
                check.worst_first = ka;
                check.worst_second = kb;
                check.worst_state = state;
                check.worst_p1 = p1;
                check.worst_p2 = p2;
              }
            }
          }
        }
      }
      report.checks.push_back(check);
    }
  }
  return report;
}

}  // namespace qpc
