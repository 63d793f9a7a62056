#ifndef QPC_NOISE_HPP
#define QPC_NOISE_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qpc/quantum.hpp"

namespace qpc {

enum class NoiseKind { AmplitudeDamping, BitFlip, PhaseFlip, Depolarizing };

inline constexpr std::array<NoiseKind, 4> kAllNoiseKinds = {
    NoiseKind::AmplitudeDamping, NoiseKind::BitFlip, NoiseKind::PhaseFlip, NoiseKind::Depolarizing};

/// Short lowercase tag: ad, bf, pf, dc.
std::string_view to_string(NoiseKind k);
NoiseKind noise_kind_from_string(std::string_view tag);

template <typename Scalar>
struct KrausSet {
  NoiseKind kind;
  Scalar p;
  std::vector<Operator2<Scalar>> operators;
};

/// max |sum_i K_i^dagger K_i - I|.
template <typename Scalar>
Scalar completeness_error(const KrausSet<Scalar>& set) {
  Operator2<Scalar> sum = Operator2<Scalar>::Zero();
  for (const auto& k : set.operators) sum += k.adjoint() * k;
  return (sum - Operator2<Scalar>::Identity()).cwiseAbs().maxCoeff();
}

template <typename Scalar = double>
KrausSet<Scalar> kraus_set(NoiseKind kind, Scalar p) {
  if (!(p >= Scalar(0) && p <= Scalar(1))) {
    throw std::invalid_argument("kraus_set: probability must lie in [0, 1]");
  }
  using std::sqrt;
  KrausSet<Scalar> set{kind, p, {}};
  switch (kind) {
    case NoiseKind::AmplitudeDamping: {
      Operator2<Scalar> e0 = Operator2<Scalar>::Zero();
      e0(0, 0) = 1;
      e0(1, 1) = sqrt(Scalar(1) - p);
      Operator2<Scalar> e1 = Operator2<Scalar>::Zero();
      e1(0, 1) = sqrt(p);
      set.operators = {e0, e1};
      break;
    }
    case NoiseKind::BitFlip:
      set.operators = {sqrt(Scalar(1) - p) * identity2<Scalar>(), sqrt(p) * pauli_x<Scalar>()};
      break;
    case NoiseKind::PhaseFlip:
      set.operators = {sqrt(Scalar(1) - p) * identity2<Scalar>(), sqrt(p) * pauli_z<Scalar>()};
      break;
    case NoiseKind::Depolarizing: {
      const Scalar w = sqrt(p / Scalar(3));
      set.operators = {sqrt(Scalar(1) - p) * identity2<Scalar>(), w * pauli_x<Scalar>(),
                       w * pauli_y<Scalar>(), w * pauli_z<Scalar>()};
      break;
    }
  }
  return set;
}

/// The noiseless channel, expressed as bit flip at p = 0.
template <typename Scalar = double>
KrausSet<Scalar> identity_channel() {
  return kraus_set<Scalar>(NoiseKind::BitFlip, Scalar(0));
}

inline constexpr double kCompletenessTolerance = 1e-10;

/// sum_{i,j} (K_i (x) L_j) rho (K_i (x) L_j)^dagger.
template <typename Scalar>
Density<Scalar> apply_two_qubit_channel(const Density<Scalar>& rho, const KrausSet<Scalar>& left,
                                        const KrausSet<Scalar>& right) {
  if (completeness_error(left) > Scalar(kCompletenessTolerance) ||
      completeness_error(right) > Scalar(kCompletenessTolerance)) {
    throw std::invalid_argument("apply_two_qubit_channel: Kraus set is not trace preserving");
  }
  Density<Scalar> out = Density<Scalar>::Zero();
  for (const auto& k : left.operators) {
    for (const auto& l : right.operators) {
      const Operator4<Scalar> m = kron<Scalar>(k, l);
      out.noalias() += m * rho * m.adjoint();
    }
  }
  return out;
}

/// Channel on one slot only; the other qubit is untouched.
template <typename Scalar>
Density<Scalar> apply_local_channel(const Density<Scalar>& rho, const KrausSet<Scalar>& set, Slot slot) {
  if (completeness_error(set) > Scalar(kCompletenessTolerance)) {
    throw std::invalid_argument("apply_local_channel: Kraus set is not trace preserving");
  }
  Density<Scalar> out = Density<Scalar>::Zero();
  for (const auto& k : set.operators) {
    const Operator4<Scalar> m = embed<Scalar>(k, slot);
    out.noalias() += m * rho * m.adjoint();
  }
  return out;
}

enum class Trips { OneWay, RoundTrip };

std::string_view to_string(Trips t);
Trips trips_from_string(std::string_view tag);

struct ArmNoise {
  NoiseKind kind;
  double p;
};

/// Parses "kind:p", e.g. "bf:0.25".
ArmNoise arm_noise_from_string(std::string_view spec);
std::string to_string(const ArmNoise& n);

struct NoiseScenario {
  ArmNoise first;
  ArmNoise second;
  BellState initial;
  Trips trips;
};

/// Exact evolution: one channel application for one-way, two with the same
/// per-qubit sets for a round trip, then <psi|rho'|psi>.
template <typename Scalar = double>
Scalar oracle_fidelity(const NoiseScenario& s) {
  const auto left = kraus_set<Scalar>(s.first.kind, Scalar(s.first.p));
  const auto right = kraus_set<Scalar>(s.second.kind, Scalar(s.second.p));
  Density<Scalar> rho = bell_density<Scalar>(s.initial);
  rho = apply_two_qubit_channel(rho, left, right);
  if (s.trips == Trips::RoundTrip) rho = apply_two_qubit_channel(rho, left, right);
  return fidelity(s.initial, rho);
}

/// Which set of closed forms to evaluate. Printed is the published set of
/// analytic expressions; KrausConsistent replaces the ones that disagree with
/// exact evolution under the same Kraus operators.
enum class FormulaEdition { Printed, KrausConsistent };

std::string_view to_string(FormulaEdition e);
FormulaEdition formula_edition_from_string(std::string_view tag);

/// Formula families, identified by the canonical (first <= second) kind pair.
enum class FormulaFamily {
  AdAdPsi,
  AdAdPhi,
  AdBf,
  AdPf,
  AdDc,
  BfBf,
  BfPf,
  BfDc,
  PfDc,
  DcDc,
  PfPf,  // reuses the bit-flip pair formula
};

inline constexpr std::array<FormulaFamily, 11> kAllFormulaFamilies = {
    FormulaFamily::AdAdPsi, FormulaFamily::AdAdPhi, FormulaFamily::AdBf, FormulaFamily::AdPf,
    FormulaFamily::AdDc,    FormulaFamily::BfBf,    FormulaFamily::BfPf, FormulaFamily::BfDc,
    FormulaFamily::PfDc,    FormulaFamily::DcDc,    FormulaFamily::PfPf};

std::string_view to_string(FormulaFamily f);

/// One row of the dispatch table: a kind pair (and, for AD-AD, a parity)
/// resolves to a family, evaluated with p1/p2 swapped when the pair is the
/// mirror image of the canonical one.
struct FormulaDispatch {
  FormulaFamily family;
  bool swapped;
};

FormulaDispatch dispatch_formula(NoiseKind first, NoiseKind second, BellState initial);

/// Every (first, second) kind pair that resolves to the given family.
std::vector<std::pair<NoiseKind, NoiseKind>> kind_pairs_for(FormulaFamily family);

/// Evaluates a family at (p1, p2) in canonical order.
double evaluate_family(FormulaFamily family, Trips trips, double p1, double p2,
                       FormulaEdition edition = FormulaEdition::Printed);

double closed_form_oneway(const NoiseScenario& s, FormulaEdition edition = FormulaEdition::Printed);
double closed_form_roundtrip(const NoiseScenario& s, FormulaEdition edition = FormulaEdition::Printed);

/// Dispatches on s.trips.
double closed_form(const NoiseScenario& s, FormulaEdition edition = FormulaEdition::Printed);

inline constexpr double kFormulaTolerance = 1e-10;

struct FormulaCheck {
  FormulaFamily family;
  Trips trips;
  std::size_t points = 0;
  double max_deviation = 0.0;
  // Where the maximum was attained.
  NoiseKind worst_first = NoiseKind::AmplitudeDamping;
  NoiseKind worst_second = NoiseKind::AmplitudeDamping;
  BellState worst_state = BellState::PsiPlus;
  double worst_p1 = 0.0;
  double worst_p2 = 0.0;

  bool passed() const { return max_deviation < kFormulaTolerance; }
  std::string name() const;
};

struct FormulaReport {
  double grid_step;
  FormulaEdition edition;
  std::vector<FormulaCheck> checks;

  bool passed() const;
  std::vector<const FormulaCheck*> failures() const;
};

/// Grid points {0, step, ..., 1}; step must divide 1.
std::vector<double> probability_grid(double step);

/// Sweeps every family, both trip modes, every Bell state the family applies
/// to and every ordered kind pair that dispatches to it.
FormulaReport verify_all_formulas(double grid_step, FormulaEdition edition = FormulaEdition::Printed);

}  // namespace qpc

#endif  // QPC_NOISE_HPP
