// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "qpc/adversary.hpp"
#include "qpc/analysis.hpp"
#include "qpc/efficiency.hpp"
#include "qpc/format.hpp"

using namespace qpc;

namespace {

struct Result {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// 1 -------------------------------------------------------------------------

Result formula_equivalence(FormulaEdition edition) {
  const auto t0 = Clock::now();
  const FormulaReport report = verify_all_formulas(0.05, edition);
  const double elapsed = seconds_since(t0);
  std::size_t points = 0;
  double worst = 0.0;
  std::string failing;
  for (const auto& c : report.checks) {
    points += c.points;
    worst = std::max(worst, c.max_deviation);
    if (!c.passed()) failing += (failing.empty() ? "" : " ") + c.name() + "(" + fmt(c.max_deviation, 3) + ")";
  }
  std::string detail = std::to_string(report.checks.size()) + " families, " + std::to_string(points) +
                       " points, max deviation " + fmt(worst, 3) + ", " + fmt(elapsed, 3) + " s";
  if (!failing.empty()) detail += "; failing: " + failing;
  return {report.passed() && elapsed < 10.0, detail};
}

// 2 -------------------------------------------------------------------------

Result parity_confined_to_damping_pair() {
  const auto grid = probability_grid(0.05);
  double worst_other = 0.0;
  double min_ad_gap = INFINITY;
  std::size_t scenarios = 0;
  for (NoiseKind a : kAllNoiseKinds) {
    for (NoiseKind b : kAllNoiseKinds) {
      const bool ad_pair = a == NoiseKind::AmplitudeDamping && b == NoiseKind::AmplitudeDamping;
      for (Trips t : {Trips::OneWay, Trips::RoundTrip}) {
        for (double p1 : grid) {
          for (double p2 : grid) {
            double f[4];
            for (int s = 0; s < 4; ++s) f[s] = oracle_fidelity(NoiseScenario{{a, p1}, {b, p2}, kAllBellStates[s], t});
            ++scenarios;
            if (!ad_pair) {
              for (int s = 1; s < 4; ++s) worst_other = std::max(worst_other, std::abs(f[s] - f[0]));
            } else if (p1 == 1.0 && p2 == 1.0 && t == Trips::OneWay) {
              min_ad_gap = std::abs(f[0] - f[2]);
            }
          }
        }
      }
    }
  }
  using S = NoiseScenario;
  const auto AD = NoiseKind::AmplitudeDamping;
  const double psi = closed_form(S{{AD, 1}, {AD, 1}, BellState::PsiPlus, Trips::OneWay});
  const double phi = closed_form(S{{AD, 1}, {AD, 1}, BellState::PhiPlus, Trips::OneWay});
  const double psi_o = oracle_fidelity(S{{AD, 1}, {AD, 1}, BellState::PsiPlus, Trips::OneWay});
  const double phi_o = oracle_fidelity(S{{AD, 1}, {AD, 1}, BellState::PhiPlus, Trips::OneWay});
  const bool ad_ok = std::abs(psi - 0.5) < 1e-12 && std::abs(phi) < 1e-12 && std::abs(psi_o - 0.5) < 1e-12 &&
                     std::abs(phi_o) < 1e-12 && min_ad_gap > 0.1;
  return {worst_other < 1e-12 && ad_ok,
          std::to_string(scenarios) + " scenarios, max psi/phi spread outside AD-AD " + fmt(worst_other, 3) +
              "; AD-AD at p1=p2=1: psi " + fmt(psi) + ", phi " + fmt(phi)};
}

// 3 -------------------------------------------------------------------------

Result bit_flip_revival() {
  double worst = 0.0;
  double min_f = INFINITY, argmin = -1;
  for (double p : probability_grid(0.05)) {
    const NoiseScenario s{{NoiseKind::BitFlip, p}, {NoiseKind::BitFlip, p}, BellState::PsiPlus, Trips::OneWay};
    const double f = closed_form(s);
    worst = std::max({worst, std::abs(f - (1 - 2 * p + 2 * p * p)), std::abs(f - oracle_fidelity(s))});
    if (f < min_f) {
      min_f = f;
      argmin = p;
    }
  }
  const NoiseScenario one{{NoiseKind::BitFlip, 1}, {NoiseKind::BitFlip, 1}, BellState::PsiPlus, Trips::OneWay};
  const double f1 = closed_form(one);
  const bool ok = worst < 1e-12 && std::abs(min_f - 0.5) < 1e-12 && argmin == 0.5 && std::abs(f1 - 1) < 1e-12;
  return {ok, "min " + fmt(min_f) + " at p=" + fmt(argmin) + ", F(1,1)=" + fmt(f1) + ", max deviation " +
                  fmt(worst, 3)};
}

// 4 -------------------------------------------------------------------------

Result soundness() {
  const auto t0 = Clock::now();
  std::size_t runs = 0, wrong = 0, aborts = 0, restarts = 0;
  for (Protocol p : {Protocol::Osb, Protocol::Sqpc}) {
    std::uint64_t seed = p == Protocol::Osb ? 0 : (1ull << 40);
    for (std::size_t n = 1; n <= 8; ++n) {
      const std::uint64_t count = 1ull << n;
      for (std::uint64_t a = 0; a < count; ++a) {
        for (std::uint64_t b = 0; b < count; ++b) {
          const BitString m_a = BitString::from_integer(a, n);
          const BitString m_b = BitString::from_integer(b, n);
          RunContext ctx(++seed);
          ComparisonOutcome outcome = Equal{};
          if (p == Protocol::Osb) {
            osb::Options opt;
            opt.n = n;
            outcome = osb::run(m_a, m_b, opt, ctx).outcome;
          } else {
            sqpc::Options opt;
            opt.n = n;
            auto r = sqpc::run(m_a, m_b, opt, ctx);
            restarts += r.attempts - 1;
            outcome = std::move(r.outcome);
          }
          ++runs;
          if (outcome.is_aborted()) {
            ++aborts;
          } else if (!(outcome == ComparisonOutcome::from_result(m_a ^ m_b)) || outcome.is_equal() != (a == b)) {
            ++wrong;
          }
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {wrong == 0 && aborts == 0 && elapsed < 60.0,
          std::to_string(runs) + " runs, " + std::to_string(wrong) + " wrong verdicts, " + std::to_string(aborts) +
              " aborts (" + std::to_string(restarts) + " SQPC yield restarts), " + fmt(elapsed, 3) + " s"};
}

// 5 -------------------------------------------------------------------------

Result iy_attack() {
  CampaignConfig c;
  c.protocol = Protocol::Osb;
  c.n = 8;
  c.strategy = AttackStrategy{AttackKind::PauliIYOnAliceArm};
  c.trials = 1000;
  c.seed = 5;
  c.check_fraction = 0.0;
  std::vector<AttackReport> reports;
  const auto off = run_with_attack(c, &reports);
  std::size_t predicted = 0;
  for (std::size_t t = 0; t < reports.size(); ++t) {
    RunContext ctx(mix_seed(c.seed, t));
    const BitString m_a = BitString::random(c.n, ctx.stream(Stream::Harness));
    const BitString m_b = BitString::random(c.n, ctx.stream(Stream::Harness));
    predicted += reports[t].outcome == iy_attack_consequence(m_a, m_b);
  }
  bool on_ok = true;
  std::string on_detail;
  for (double f : {0.5, 1.0 / 16}) {  // N and a single checked coordinate
    c.check_fraction = f;
    const auto on = run_with_attack(c);
    on_ok = on_ok && on.detection_rate() == 1.0 && on.stage_detection_rate(Stage::Osb3) == 0.0;
    on_detail += " check " + std::to_string(osb::checked_count(c.n, f)) + " bits: detection " +
                 fmt(on.detection_rate()) + ", GV " + fmt(on.stage_detection_rate(Stage::Osb3)) + (f == 0.5 ? ";" : "");
  }
  const bool ok = predicted == 1000 && off.detected == 0 && on_ok;
  return {ok, "check off: " + std::to_string(predicted) + "/1000 match complement prediction, GV detections " +
                  std::to_string(off.detected) + ";" + on_detail};
}

// 6 -------------------------------------------------------------------------

Result detection_statistics() {
  CampaignConfig ir;
  ir.protocol = Protocol::Sqpc;
  ir.n = 16;
  ir.strategy = AttackStrategy{AttackKind::InterceptResendComputational};
  ir.trials = 400;
  ir.seed = 6;
  ir.tolerance = 1.0;  // keep running so every Case-1 pair is counted
  const auto s_ir = run_with_attack(ir);

  CampaignConfig fr = ir;
  fr.strategy = AttackStrategy{AttackKind::FullRandomizeBell};
  const auto s_fr = run_with_attack(fr);

  CampaignConfig osb;
  osb.protocol = Protocol::Osb;
  osb.n = 20;
  osb.strategy = AttackStrategy{AttackKind::InterceptResendComputational};
  osb.trials = 1000;
  osb.seed = 6;
  const auto s_osb = run_with_attack(osb);

  const bool ok = s_ir.case1_pairs >= 10000 && std::abs(s_ir.case1_mismatch_rate() - 0.5) <= 0.02 &&
                  s_fr.case1_pairs >= 10000 && std::abs(s_fr.case1_mismatch_rate() - 0.75) <= 0.02 &&
                  s_osb.detected >= 999;
  return {ok, "intercept-resend " + fmt(s_ir.case1_mismatch_rate(), 4) + " over " + std::to_string(s_ir.case1_pairs) +
                  " Case-1 pairs; randomize-bell " + fmt(s_fr.case1_mismatch_rate(), 4) + " over " +
                  std::to_string(s_fr.case1_pairs) + "; OSB N=20 detected " + std::to_string(s_osb.detected) +
                  "/1000"};
}

// 7 -------------------------------------------------------------------------

Result memory_attack() {
  std::size_t key_bits = 0, key_total = 0, runs = 0, full_support = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::uint64_t t = 0; t < 8; ++t) {
      RunContext ctx(mix_seed(7 + n, t));
      const BitString m_a = BitString::random(n, ctx.stream(Stream::Harness));
      const BitString m_b = BitString::random(n, ctx.stream(Stream::Harness));
      MemoryAttackByAlice alice(AttackStrategy{AttackKind::MemoryAttackByAlice});
      sqpc::Options opt;
      opt.n = n;
      const auto run = sqpc::run(m_a, m_b, opt, ctx, &alice);
      if (!run.comparison) return {false, "memory-attack run did not complete: " + run.outcome.summary()};
      ++runs;
      BitString stolen(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto bit = alice.known_bit(Arm::Bob, run.audit->retained[i]);
        if (bit) stolen.set(i, *bit);
        key_bits += bit && *bit == run.audit->k_b[i];
      }
      key_total += n;
      full_support += eve_information_bound(alice_view(run, m_a, stolen), Target::MessageB) == (std::size_t{1} << n);
    }
  }
  return {key_bits == key_total && full_support == runs,
          "K_B bits recovered " + std::to_string(key_bits) + "/" + std::to_string(key_total) + "; M_B posterior support 2^N in " +
              std::to_string(full_support) + "/" + std::to_string(runs) + " runs (N=1..8)"};
}

// 8 -------------------------------------------------------------------------

Result efficiency_values() {
  const std::uint64_t n = 1000000;
  const auto osb = efficiency(Protocol::Osb, n);
  const auto sq = efficiency(Protocol::Sqpc, n);
  const bool exact = osb.eta == Rational::make(2 * n, 17 * n + 1) && sq.eta == Rational::make(2 * n, 102 * n + 1);
  char a[32], b[32];
  std::snprintf(a, sizeof a, "%.4f%%", 100 * osb.eta.to_double());
  std::snprintf(b, sizeof b, "%.4f%%", 100 * sq.eta.to_double());
  const bool printed = std::string(a) == "11.7647%" && std::string(b) == "1.9608%";
  const bool close = std::abs(osb.eta.to_double() - 0.117647) < 1e-6 && std::abs(sq.eta.to_double() - 0.019608) < 1e-6;
  return {exact && printed && close, "N=10^6: OSB " + osb.eta.to_string() + " = " + a + ", SQPC " + sq.eta.to_string() +
                                         " = " + b};
}

// 9 -------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("qpc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"run-osb", "run --protocol osb --n 16 --seed 7 --ma 0xBEEF --mb 0xBEEE"},
      {"run-sqpc", "run --protocol sqpc --n 12 --seed 9 --noise-a pf:0.1 --tolerance 0.5"},
      {"run-csv", "run --protocol osb --n 4 --seed 3 --format csv"},
      {"grid", "fidelity-grid --step 0.25 --trips roundtrip"},
      {"attack", "attack --protocol sqpc --n 4 --attack randomize-bell:0.5 --trials 200 --tolerance 1 --threads 2"},
      {"attack-log", "attack --protocol osb --n 6 --attack intercept-resend --trials 100 --format log"},
      {"efficiency", "efficiency --n 1,10,1000000"},
      {"verify", "verify-formulas --step 0.25"},
  };
  std::size_t identical = 0;
  std::string differing;
  for (const auto& [name, args] : commands) {
    std::string outputs[2];
    int codes[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path file = dir / (name + "." + std::to_string(k) + ".out");
      const fs::path console = dir / (name + "." + std::to_string(k) + ".console");
      const std::string cmd = std::string("\"") + QPC_CLI_PATH + "\" " + args + " --out \"" + file.string() +
                              "\" > \"" + console.string() + "\" 2>&1";
      codes[k] = std::system(cmd.c_str());
      outputs[k] = slurp(file) + "\n--\n" + slurp(console);
    }
    if (outputs[0] == outputs[1] && codes[0] == codes[1] && outputs[0].size() > 4) {
      ++identical;
    } else {
      differing += " " + name;
    }
  }
  fs::remove_all(dir);
  return {identical == commands.size(), std::to_string(identical) + "/" + std::to_string(commands.size()) +
                                            " commands byte-identical across two runs" +
                                            (differing.empty() ? "" : "; differing:" + differing)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Result()> check;
  };
  const Criterion criteria[] = {
      {"1", "formula-oracle equivalence (printed closed forms)", [] { return formula_equivalence(FormulaEdition::Printed); }},
      {"2", "parity dependence confined to AD-AD", parity_confined_to_damping_pair},
      {"3", "bit-flip revival", bit_flip_revival},
      {"4", "noiseless soundness, exhaustive N<=8", soundness},
      {"5", "iY attack consequence and detection", iy_attack},
      {"6", "detection statistics", detection_statistics},
      {"7", "memory attack", memory_attack},
      {"8", "efficiency", efficiency_values},
      {"9", "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Result r;
    try {
      r = c.check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("[%s] criterion %s: %s -- %s\n", r.pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str());
    std::fflush(stdout);
  }
  // Not a criterion: the corrected closed forms against the same oracle.
  const Result extra = formula_equivalence(FormulaEdition::KrausConsistent);
  std::printf("[%s] supplementary: formula-oracle equivalence (kraus-consistent closed forms) -- %s\n",
              extra.pass ? "PASS" : "FAIL", extra.detail.c_str());
  std::printf("%d of %zu criteria failed\n", failed, std::size(criteria));
  return failed;
}
