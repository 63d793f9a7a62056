#include <gtest/gtest.h>

#include <set>

#include "qpc/noise.hpp"

using namespace qpc;

namespace {

NoiseScenario sc(NoiseKind a, double p1, NoiseKind b, double p2, BellState s, Trips t = Trips::OneWay) {
  return {{a, p1}, {b, p2}, s, t};
}

constexpr auto AD = NoiseKind::AmplitudeDamping;
constexpr auto BF = NoiseKind::BitFlip;
constexpr auto PF = NoiseKind::PhaseFlip;
constexpr auto DC = NoiseKind::Depolarizing;

}  // namespace

TEST(KrausSet, OperatorCounts) {
  EXPECT_EQ(kraus_set(AD, 0.2).operators.size(), 2u);
  EXPECT_EQ(kraus_set(BF, 0.2).operators.size(), 2u);
  EXPECT_EQ(kraus_set(PF, 0.2).operators.size(), 2u);
  EXPECT_EQ(kraus_set(DC, 0.2).operators.size(), 4u);
}

TEST(KrausSet, CompletenessOnFineGrid) {
  for (NoiseKind k : kAllNoiseKinds)
    for (int i = 0; i <= 100; ++i) EXPECT_LE(completeness_error(kraus_set(k, i / 100.0)), 1e-12);
}

TEST(KrausSet, RejectsOutOfRangeProbability) {
  EXPECT_THROW(kraus_set(BF, -0.01), std::invalid_argument);
  EXPECT_THROW(kraus_set(DC, 1.01), std::invalid_argument);
}

TEST(KrausSet, BitFlipAtZeroIsIdentity) {
  const auto set = kraus_set(BF, 0.0);
  EXPECT_LE((set.operators[0] - identity2<double>()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE(set.operators[1].cwiseAbs().maxCoeff(), 0.0);
}

TEST(KrausSet, FullDampingMapsExcitedToGround) {
  const auto set = kraus_set(AD, 1.0);
  Operator2<double> expected = Operator2<double>::Zero();
  expected(0, 1) = 1;
  EXPECT_LE((set.operators[1] - expected).cwiseAbs().maxCoeff(), 1e-15);
  Operator2<double> one = Operator2<double>::Zero();
  one(1, 1) = 1;
  Operator2<double> out = Operator2<double>::Zero();
  for (const auto& k : set.operators) out += k * one * k.adjoint();
  Operator2<double> zero = Operator2<double>::Zero();
  zero(0, 0) = 1;
  EXPECT_LE((out - zero).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(KrausSet, DepolarizingCompleteness) { EXPECT_LE(completeness_error(kraus_set(DC, 0.3)), 1e-12); }

TEST(NoiseTags, RoundTrip) {
  for (NoiseKind k : kAllNoiseKinds) EXPECT_EQ(noise_kind_from_string(to_string(k)), k);
  const ArmNoise n = arm_noise_from_string("bf:0.25");
  EXPECT_EQ(n.kind, BF);
  EXPECT_DOUBLE_EQ(n.p, 0.25);
  EXPECT_THROW(arm_noise_from_string("xx:0.1"), std::invalid_argument);
  EXPECT_THROW(arm_noise_from_string("bf:1.5"), std::invalid_argument);
  EXPECT_THROW(arm_noise_from_string("bf"), std::invalid_argument);
}

TEST(ClosedFormOneWay, DampingBothQubits) {
  EXPECT_NEAR(closed_form_oneway(sc(AD, 0.5, AD, 0.5, BellState::PsiPlus)), 0.625, 1e-12);
  EXPECT_NEAR(closed_form_oneway(sc(AD, 0.0, AD, 1.0, BellState::PhiPlus)), 0.25, 1e-12);
}

TEST(ClosedFormOneWay, BitFlipRevival) {
  for (BellState s : kAllBellStates) EXPECT_NEAR(closed_form_oneway(sc(BF, 1, BF, 1, s)), 1.0, 1e-12);
}

TEST(ClosedFormOneWay, BitFlipDepolarizingCorner) {
  EXPECT_NEAR(closed_form_oneway(sc(BF, 1, DC, 0, BellState::PhiMinus)), 0.0, 1e-12);
}

TEST(ClosedFormOneWay, PrintedDepolarizingPairAtOne) {
  EXPECT_NEAR(closed_form_oneway(sc(DC, 1, DC, 1, BellState::PsiPlus)), 0.5, 1e-12);
}

TEST(ClosedFormRoundTrip, DampingBothQubits) {
  EXPECT_NEAR(closed_form_roundtrip(sc(AD, 1, AD, 1, BellState::PhiPlus, Trips::RoundTrip)), 0.0, 1e-12);
  EXPECT_NEAR(closed_form_roundtrip(sc(AD, 1, AD, 1, BellState::PsiPlus, Trips::RoundTrip)), 0.5, 1e-12);
}

TEST(ClosedFormRoundTrip, PhaseFlipDepolarizing) {
  EXPECT_NEAR(closed_form_roundtrip(sc(PF, 0.5, DC, 0, BellState::PsiMinus, Trips::RoundTrip)), 0.5, 1e-12);
  EXPECT_NEAR(closed_form_roundtrip(sc(DC, 0, DC, 0, BellState::PhiPlus, Trips::RoundTrip)), 1.0, 1e-12);
}

TEST(ClosedForm, DispatchesOnTrips) {
  const auto s1 = sc(AD, 0.3, BF, 0.6, BellState::PsiPlus, Trips::OneWay);
  const auto s2 = sc(AD, 0.3, BF, 0.6, BellState::PsiPlus, Trips::RoundTrip);
  EXPECT_DOUBLE_EQ(closed_form(s1), closed_form_oneway(s1));
  EXPECT_DOUBLE_EQ(closed_form(s2), closed_form_roundtrip(s2));
}

TEST(Oracle, ZeroNoiseIsPerfect) {
  for (NoiseKind a : kAllNoiseKinds)
    for (NoiseKind b : kAllNoiseKinds)
      for (BellState s : kAllBellStates)
        for (Trips t : {Trips::OneWay, Trips::RoundTrip}) EXPECT_NEAR(oracle_fidelity(sc(a, 0, b, 0, s, t)), 1.0, 1e-12);
}

TEST(Oracle, BitFlipPhaseFlipProduct) {
  EXPECT_NEAR(oracle_fidelity(sc(BF, 0.3, PF, 0.4, BellState::PsiPlus)), 0.42, 1e-12);
}

TEST(Oracle, DampingBitFlipRoundTrip) {
  EXPECT_NEAR(oracle_fidelity(sc(AD, 0, BF, 0.5, BellState::PhiMinus, Trips::RoundTrip)), 0.5, 1e-12);
}

// Values computed independently with numpy (Kraus evolution of the Bell
// projector) and frozen here.
TEST(Oracle, FrozenReferenceValues) {
  struct Case {
    NoiseScenario s;
    double f;
  };
  const Case cases[] = {
      {sc(DC, 1, DC, 1, BellState::PsiPlus), 0.33333333333333315},
      {sc(AD, 0.3, DC, 0.6, BellState::PhiMinus), 0.36866600265340743},
      {sc(BF, 0.2, DC, 0.7, BellState::PsiPlus), 0.2866666666666666},
      {sc(PF, 0.4, DC, 0.9, BellState::PhiPlus), 0.17999999999999994},
      {sc(AD, 0.3, DC, 0.6, BellState::PsiPlus, Trips::RoundTrip), 0.2688999999999999},
      {sc(BF, 0.25, PF, 0.35, BellState::PsiPlus, Trips::RoundTrip), 0.340624999999999},
      {sc(DC, 0.5, DC, 0.5, BellState::PsiMinus, Trips::RoundTrip), 0.25925925925925936},
      {sc(PF, 0.1, DC, 0.2, BellState::PhiMinus, Trips::RoundTrip), 0.5565333333333331},
      {sc(AD, 0.2, BF, 0.7, BellState::PhiPlus, Trips::RoundTrip), 0.5075999999999998},
      {sc(AD, 0.4, PF, 0.3, BellState::PsiMinus), 0.5549193338482965},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(oracle_fidelity(c.s), c.f, 1e-12);
    EXPECT_NEAR(closed_form(c.s, FormulaEdition::KrausConsistent), c.f, 1e-12);
  }
}

TEST(Oracle, FidelityWithinUnitInterval) {
  for (NoiseKind a : kAllNoiseKinds)
    for (NoiseKind b : kAllNoiseKinds)
      for (double p1 : {0.0, 0.35, 0.8, 1.0})
        for (double p2 : {0.0, 0.5, 1.0})
          for (Trips t : {Trips::OneWay, Trips::RoundTrip}) {
            const double f = oracle_fidelity(sc(a, p1, b, p2, BellState::PhiMinus, t));
            EXPECT_GE(f, -1e-12);
            EXPECT_LE(f, 1.0 + 1e-12);
          }
}

TEST(Oracle, SwapSymmetry) {
  // Exchanging the qubits maps psi+- and phi+ to themselves and phi- to
  // -phi-, so the fidelity is invariant under swapping (kind, p) between arms.
  for (NoiseKind a : kAllNoiseKinds)
    for (NoiseKind b : kAllNoiseKinds)
      for (BellState s : kAllBellStates)
        for (Trips t : {Trips::OneWay, Trips::RoundTrip})
          EXPECT_NEAR(oracle_fidelity(sc(a, 0.2, b, 0.65, s, t)), oracle_fidelity(sc(b, 0.65, a, 0.2, s, t)), 1e-12);
}

TEST(Oracle, ParityIndependenceOutsideDampingPair) {
  for (NoiseKind a : kAllNoiseKinds)
    for (NoiseKind b : kAllNoiseKinds) {
      if (a == AD && b == AD) continue;
      for (Trips t : {Trips::OneWay, Trips::RoundTrip}) {
        const double ref = oracle_fidelity(sc(a, 0.3, b, 0.45, BellState::PsiPlus, t));
        for (BellState s : kAllBellStates) {
          EXPECT_NEAR(oracle_fidelity(sc(a, 0.3, b, 0.45, s, t)), ref, 1e-12);
          EXPECT_NEAR(closed_form(sc(a, 0.3, b, 0.45, s, t)), closed_form(sc(a, 0.3, b, 0.45, BellState::PsiPlus, t)),
                      1e-12);
        }
      }
    }
}

TEST(Oracle, BitFlipDiagonal) {
  for (int i = 0; i <= 20; ++i) {
    const double p = i / 20.0;
    EXPECT_NEAR(oracle_fidelity(sc(BF, p, BF, p, BellState::PsiPlus)), 1 - 2 * p + 2 * p * p, 1e-12);
  }
}

TEST(Dispatch, DampingPairSplitsOnParity) {
  EXPECT_EQ(dispatch_formula(AD, AD, BellState::PsiMinus).family, FormulaFamily::AdAdPsi);
  EXPECT_EQ(dispatch_formula(AD, AD, BellState::PhiPlus).family, FormulaFamily::AdAdPhi);
}

TEST(Dispatch, MirroredPairsSwap) {
  const auto d = dispatch_formula(DC, BF, BellState::PsiPlus);
  EXPECT_EQ(d.family, FormulaFamily::BfDc);
  EXPECT_TRUE(d.swapped);
  EXPECT_FALSE(dispatch_formula(BF, DC, BellState::PsiPlus).swapped);
  EXPECT_EQ(dispatch_formula(PF, PF, BellState::PsiPlus).family, FormulaFamily::PfPf);
}

TEST(Dispatch, EveryOrderedPairResolves) {
  std::set<FormulaFamily> seen;
  for (NoiseKind a : kAllNoiseKinds)
    for (NoiseKind b : kAllNoiseKinds)
      for (BellState s : kAllBellStates) seen.insert(dispatch_formula(a, b, s).family);
  EXPECT_EQ(seen.size(), kAllFormulaFamilies.size());
  std::size_t pairs = 0;
  for (FormulaFamily f : kAllFormulaFamilies) pairs += kind_pairs_for(f).size();
  EXPECT_EQ(pairs, 16u + 1u);  // AD-AD listed under both parity families
}

TEST(Dispatch, PhaseFlipPairReusesBitFlipFormula) {
  for (Trips t : {Trips::OneWay, Trips::RoundTrip})
    for (double p1 : {0.1, 0.6})
      for (double p2 : {0.25, 0.9})
        EXPECT_DOUBLE_EQ(evaluate_family(FormulaFamily::PfPf, t, p1, p2), evaluate_family(FormulaFamily::BfBf, t, p1, p2));
}

TEST(Verify, BitFlipPairPasses) {
  const auto report = verify_all_formulas(0.1);
  for (const auto& c : report.checks) {
    if (c.family == FormulaFamily::BfBf || c.family == FormulaFamily::AdAdPsi || c.family == FormulaFamily::AdAdPhi) {
      EXPECT_TRUE(c.passed()) << c.name() << " " << c.max_deviation;
    }
  }
}

TEST(Verify, CoverageAtCoarseStep) {
  const auto report = verify_all_formulas(0.5);
  std::size_t oneway = 0, roundtrip = 0;
  for (const auto& c : report.checks) {
    EXPECT_GT(c.points, 0u);
    (c.trips == Trips::OneWay ? oneway : roundtrip)++;
  }
  EXPECT_EQ(oneway, kAllFormulaFamilies.size());
  EXPECT_EQ(roundtrip, kAllFormulaFamilies.size());
  EXPECT_EQ(probability_grid(0.5).size(), 3u);
}

TEST(Verify, RejectsBadStep) {
  EXPECT_THROW(verify_all_formulas(0.0), std::invalid_argument);
  EXPECT_THROW(verify_all_formulas(0.75), std::invalid_argument);
  EXPECT_THROW(probability_grid(0.3), std::invalid_argument);
}

TEST(Verify, KrausConsistentEditionMatchesEverywhere) {
  const auto report = verify_all_formulas(0.05, FormulaEdition::KrausConsistent);
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed()) << c.name() << " " << c.max_deviation;
}

TEST(Verify, PrintedEditionFailuresAreTheDepolarizingAndRoundTripBitPhaseFamilies) {
  const auto report = verify_all_formulas(0.05);
  std::set<std::string> failing;
  for (const auto* c : report.failures()) failing.insert(c->name());
  const std::set<std::string> expected = {"oneway/ad-dc",    "oneway/bf-dc",    "oneway/pf-dc",
                                          "oneway/dc-dc",    "roundtrip/ad-dc", "roundtrip/bf-pf",
                                          "roundtrip/bf-dc", "roundtrip/pf-dc", "roundtrip/dc-dc"};
  EXPECT_EQ(failing, expected);
}
