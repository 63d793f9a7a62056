#ifndef QPC_OSB_HPP
#define QPC_OSB_HPP

// Orthogonal-state-based private comparison. TP splits 2N random Bell pairs
// into sequences for Alice and Bob, hides N whole |psi+> decoy pairs in each,
// and later combines the users' encrypted strings with the Bell parities.

#include <optional>
#include <vector>

#include "qpc/protocol.hpp"

namespace qpc::osb {

enum class PairRole { Message, Decoy };

struct PairRecord {
  PairRole role;
  BellState prepared;
};

/// Every prepared pair with its current joint state, plus the plain message
/// sequences S_A (first halves) and S_B (second halves).
struct QubitRegistry {
  std::vector<PairRecord> records;
  PairStates states;
  std::vector<QubitRef> s_a;
  std::vector<QubitRef> s_b;
};

struct Preparation {
  std::vector<BellState> bell_choices;  // length 2N, message pairs in order
  QubitRegistry registry;
};

/// 2N message pairs drawn uniformly from the four Bell states.
Preparation prepare(std::size_t n, Rng& tp);

/// Slots (positions in the enlarged sequence) holding one decoy pair.
struct DecoySlots {
  std::size_t first;
  std::size_t second;
};

struct EnlargedSequence {
  std::vector<QubitRef> qubits;
  std::vector<DecoySlots> decoys;  // TP's secret position map
};

struct EnlargedSequences {
  EnlargedSequence a;
  EnlargedSequence b;
};

/// Adds N |psi+> decoy pairs to each sequence, both halves of a decoy pair
/// going into the same sequence, at uniformly random slots.
EnlargedSequences insert_decoys(QubitRegistry& registry, std::size_t n, Rng& tp);

struct GvCheck {
  std::size_t decoys = 0;
  std::size_t errors = 0;
  double error_rate = 0.0;
  std::vector<BellState> outcomes;
  std::optional<Aborted> abort;

  bool passed() const { return !abort.has_value(); }
};

/// The receiver Bell-measures each decoy pair TP points to; the error rate is
/// the fraction of outcomes other than psi+. A position map that does not
/// point at whole decoy pairs aborts with a protocol error.
GvCheck gv_check(const QubitRegistry& registry, const EnlargedSequence& sequence, double tolerance,
                 Rng& receiver);

struct Correlation {
  BitString k_a;
  BitString k_b;
  std::vector<std::size_t> checked;   // message-pair indices sacrificed
  std::vector<std::size_t> retained;  // message-pair indices forming the keys
  BitString checked_a;
  BitString checked_b;
  std::vector<int> checked_parities;
  std::optional<Aborted> abort;

  bool passed() const { return !abort.has_value(); }
};

/// Number of coordinates sacrificed for the correlation check out of 2N.
std::size_t checked_count(std::size_t n, double check_fraction);

/// Alice and Bob measure every message qubit; Alice picks the coordinates to
/// sacrifice, both announce those bits and TP the Bell parities. Any pair
/// with bit_A xor bit_B != parity aborts. The first N unsacrificed
/// coordinates become K_A and K_B.
Correlation measure_and_correlate(QubitRegistry& registry, const std::vector<BellState>& bell_choices,
                                  double check_fraction, Rng& alice, Rng& bob);

struct Comparison {
  BitString c_a;
  BitString c_b;
  BitString c_tp;
  BitString r;
  ComparisonOutcome outcome;
};

/// C_A = M_A ^ K_A ^ K_AB, C_B = M_B ^ K_B ^ K_AB, R = C_A ^ C_B ^ C_TP.
Comparison compare(const BitString& m_a, const BitString& m_b, const BitString& k_a, const BitString& k_b,
                   const BitString& k_ab, const std::vector<BellState>& retained_choices);

struct Options {
  std::size_t n = 1;
  double gv_tolerance = 0.0;
  double check_fraction = 0.5;
  ChannelNoise noise;
};

/// Everything a run produced, including the private values the harness
/// needs to score attacks.
struct Run {
  ComparisonOutcome outcome = Equal{};
  ProtocolTranscript transcript;
  std::vector<BellState> bell_choices;
  std::optional<GvCheck> gv_a;
  std::optional<GvCheck> gv_b;
  std::optional<Correlation> correlation;
  BitString k_ab;
  std::optional<Comparison> comparison;
};

/// Executes OSB1..OSB8 once. An abort is reported in the outcome; restarting
/// is the caller's decision.
Run run(const BitString& m_a, const BitString& m_b, const Options& options, RunContext& ctx,
        Adversary* adversary = nullptr);

}  // namespace qpc::osb

#endif  // QPC_OSB_HPP
