#ifndef QPC_ADVERSARY_HPP
#define QPC_ADVERSARY_HPP

// Attack strategies that plug into the protocol hook points, and a harness
// that runs seeded trial campaigns and aggregates what the attacks achieved.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qpc/osb.hpp"
#include "qpc/sqpc.hpp"

namespace qpc {

enum class AttackKind {
  None,
  InterceptResendComputational,
  FullRandomizeBell,
  PauliIYOnAliceArm,
  MemoryAttackByAlice,
  MemoryAttackInterceptReturns,
};

std::string_view to_string(AttackKind k);
AttackKind attack_kind_from_string(std::string_view tag);

struct AttackStrategy {
  AttackKind kind = AttackKind::None;
  bool alice_arm = true;
  bool bob_arm = true;
  double fraction = 1.0;  // per-qubit (per-pair for randomization) selection probability

  /// Throws std::invalid_argument for a fraction outside [0, 1], no target
  /// arm, or a memory attack against the orthogonal-state protocol.
  void validate(Protocol protocol) const;
};

/// Parses "name[:fraction]", e.g. "intercept-resend:0.5".
AttackStrategy attack_from_string(std::string_view spec);
std::string to_string(const AttackStrategy& s);

/// Base for the concrete strategies: remembers bits the attacker has learned
/// about each user's measurement outcome, keyed by pair index.
class Attacker : public Adversary {
 public:
  void reset() override { known_[0].clear(); known_[1].clear(); }

  /// The attacker's belief about the computational outcome of `arm`'s half
  /// of `pair`, if any.
  std::optional<int> known_bit(Arm arm, std::size_t pair) const;

 protected:
  void learn(Arm arm, std::size_t pair, int bit) { known_[arm == Arm::Alice ? 0 : 1][pair] = bit; }

 private:
  std::map<std::size_t, int> known_[2];
};

/// Eve measures selected qubits on the targeted arms in the computational
/// basis and forwards the collapsed state.
class InterceptResendComputational : public Attacker {
 public:
  explicit InterceptResendComputational(AttackStrategy s) : s_(s) {}
  void forward(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs, RunContext& ctx) override;

 private:
  AttackStrategy s_;
};

/// Replaces selected pairs with a uniformly random Bell projector. A pair is
/// only touched when every qubit of it travels on a targeted arm.
class FullRandomizeBell : public Attacker {
 public:
  explicit FullRandomizeBell(AttackStrategy s) : s_(s) {}
  void reset() override;
  void forward(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs, RunContext& ctx) override;

 private:
  AttackStrategy s_;
  std::set<std::size_t> seen_;
};

/// iY on the selected qubits travelling to Alice.
class PauliIYOnAliceArm : public Attacker {
 public:
  explicit PauliIYOnAliceArm(AttackStrategy s) : s_(s) {}
  void forward(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs, RunContext& ctx) override;

 private:
  AttackStrategy s_;
};

/// Dishonest Alice with a perfect quantum memory. She fixes her measure /
/// reflect plan in advance, intercepts Bob's incoming qubits, measures the
/// ones whose partner she will measure herself (so she learns Bob's bit) and
/// parks the rest in memory, giving Bob a |0> stand-in. On Bob's return leg
/// she swaps the genuine qubits back so the Case-1 check stays clean.
class MemoryAttackByAlice : public Attacker {
 public:
  explicit MemoryAttackByAlice(AttackStrategy s) : s_(s) {}
  void reset() override;
  std::optional<std::vector<ClassicalAction>> alice_plan(std::size_t count, RunContext& ctx) override;
  void forward(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs, RunContext& ctx) override;
  void returned(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs, RunContext& ctx) override;

 private:
  const std::vector<ClassicalAction>& plan_for(std::size_t count, RunContext& ctx);

  AttackStrategy s_;
  std::vector<ClassicalAction> plan_;
  std::map<std::size_t, DensityMatrix> memory_;
};

/// Dishonest Alice who leaves the forward leg alone and measures Bob's
/// returning qubit on every pair she measured herself.
class MemoryAttackInterceptReturns : public Attacker {
 public:
  explicit MemoryAttackInterceptReturns(AttackStrategy s) : s_(s) {}
  void reset() override;
  std::optional<std::vector<ClassicalAction>> alice_plan(std::size_t count, RunContext& ctx) override;
  void returned(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs, RunContext& ctx) override;

 private:
  AttackStrategy s_;
  std::vector<ClassicalAction> plan_;
};

/// A fresh attacker for one trial; nullptr for AttackKind::None.
std::unique_ptr<Attacker> make_attacker(const AttackStrategy& s, Protocol protocol);

struct AttackReport {
  ComparisonOutcome outcome = Equal{};
  bool detected = false;
  std::optional<Stage> detection_stage;
  std::size_t eve_key_bits_recovered = 0;
  bool verdict_corrupted = false;
  std::size_t case1_pairs = 0;
  std::size_t case1_mismatches = 0;
  std::size_t attempts = 1;
};

struct CampaignConfig {
  Protocol protocol = Protocol::Osb;
  std::size_t n = 4;
  AttackStrategy strategy;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double tolerance = 0.0;       // GV or Case-1 threshold
  double check_fraction = 0.5;  // OSB4 only
  ChannelNoise noise;
  std::optional<BitString> m_a;  // random per trial when absent
  std::optional<BitString> m_b;
  unsigned threads = 1;
};

struct AttackStatistics {
  Protocol protocol = Protocol::Osb;
  AttackStrategy strategy;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t detected = 0;
  std::map<Stage, std::size_t> detections_by_stage;
  std::size_t key_bits_recovered = 0;
  std::size_t completed = 0;
  std::size_t verdict_corrupted = 0;
  std::size_t case1_pairs = 0;
  std::size_t case1_mismatches = 0;

  double detection_rate() const;
  double stage_detection_rate(Stage s) const;
  double mean_key_bits_recovered() const;
  double case1_mismatch_rate() const;
};

/// One seeded trial.
AttackReport run_trial(const CampaignConfig& config, std::size_t trial);

/// Folds per-trial reports in trial order.
AttackStatistics aggregate(const CampaignConfig& config, const std::vector<AttackReport>& reports);

/// `trials` independent runs; trial i uses the context seeded by
/// mix_seed(seed, i), so results do not depend on the thread count.
AttackStatistics run_with_attack(const CampaignConfig& config, std::vector<AttackReport>* reports = nullptr);

/// The verdict TP announces when every message-pair parity has been flipped
/// and no correlation check catches it: R = complement(M_A ^ M_B).
ComparisonOutcome iy_attack_consequence(const BitString& m_a, const BitString& m_b);

/// What an observer knows at the end of a completed run. Public values and
/// secrets are optional; an unset secret is unknown to the observer.
struct ObserverView {
  Protocol protocol = Protocol::Osb;
  std::size_t n = 0;
  BitString c_a;
  BitString c_b;
  std::optional<BitString> c_tp;
  std::optional<BitString> r;
  std::optional<BitString> m_a, m_b, k_a, k_b, k_ab, k_at, k_bt;
};

enum class Target { MessageA, MessageB };

inline constexpr std::size_t kMaxEnumerationBits = 12;

/// Number of candidate target messages consistent with the view and the
/// protocol's key algebra (2^N is zero leakage). Every candidate is checked
/// against every position; N above kMaxEnumerationBits is rejected.
std::size_t eve_information_bound(const ObserverView& view, Target target);

/// Views of an honest run.
ObserverView tp_view(const osb::Run& run);
ObserverView outsider_view(const osb::Run& run);
/// Alice's view of an SQPC run: her own secrets plus the K_B she stole.
ObserverView alice_view(const sqpc::Run& run, const BitString& m_a, const BitString& stolen_k_b);

std::string to_csv(const std::vector<AttackStatistics>& rows);
std::string to_jsonl(const std::vector<AttackStatistics>& rows);

}  // namespace qpc

#endif  // QPC_ADVERSARY_HPP
