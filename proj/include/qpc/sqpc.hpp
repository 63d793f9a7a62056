#ifndef QPC_SQPC_HPP
#define QPC_SQPC_HPP

// Semi-quantum private comparison. Alice and Bob can only measure-and-resend
// in the computational basis or reflect; TP Bell-measures what comes back.

#include <optional>
#include <vector>

#include "qpc/protocol.hpp"

namespace qpc::sqpc {

struct Preparation {
  std::vector<BellState> bell_choices;  // length 8N
  PairStates states;
  std::vector<QubitRef> s_a;
  std::vector<QubitRef> s_b;
};

/// 8N pairs drawn uniformly from the four Bell states. No decoys.
Preparation prepare(std::size_t n, Rng& tp);

struct PartyPhase {
  std::vector<ClassicalAction> actions;
  std::vector<std::size_t> measured;  // indices with Measure, ascending
  BitString bits;                     // outcome at measured indices, 0 elsewhere
};

/// Measure-resend on a uniformly random half of the sequence (or on the
/// given plan), reflect the rest. Resending a fresh basis qubit is the same
/// as leaving the collapsed state in place.
PartyPhase classical_party_phase(std::span<const QubitRef> sequence, PairStates& pairs, Rng& rng,
                                 const std::optional<std::vector<ClassicalAction>>& plan = std::nullopt);

/// Bell measurement of every returned pair: 0 if the outcome equals TP's
/// initial choice, otherwise 1.
std::vector<int> tp_bell_phase(PairStates& pairs, const std::vector<BellState>& bell_choices, Rng& tp);

enum class CaseLabel { Case1, Case2, Case3, Case4 };

std::string_view to_string(CaseLabel c);
CaseLabel case_label(ClassicalAction alice, ClassicalAction bob);

struct Sift {
  std::vector<CaseLabel> labels;
  std::vector<std::size_t> case1;  // pair indices
  std::vector<std::size_t> case4;  // pair indices, ascending; order of K_A2N / K_B2N
  std::size_t case1_errors = 0;
  double case1_error_rate = 0.0;
  BitString k_a2n;
  BitString k_b2n;
  std::optional<Aborted> abort;

  bool passed() const { return !abort.has_value(); }
};

/// Table-1 classification and the Case-1 eavesdropping check. A run with no
/// Case-1 pair has error rate 0.
Sift sift(const PartyPhase& alice, const PartyPhase& bob, const std::vector<int>& announcements, double tolerance);

struct Audit {
  std::vector<std::size_t> disclosed;  // indices into the Case-4 list
  std::vector<BellState> disclosed_choices;
  std::vector<std::size_t> retained;   // pair indices forming K_A, K_B
  BitString k_a;
  BitString k_b;
  std::optional<Aborted> abort;

  bool passed() const { return !abort.has_value(); }
};

/// N Case-4 positions chosen by the users; TP discloses his Bell choices
/// there and any bit_A ^ bit_B != parity aborts. The first N remaining
/// Case-4 positions form the keys. Fewer than 2N Case-4 pairs is a yield
/// shortfall.
Audit parity_audit(const Sift& sifted, const std::vector<BellState>& bell_choices, std::size_t n, Rng& users);

struct Comparison {
  BitString c_a;
  BitString c_b;
  BitString c_tp;
  BitString r;
  ComparisonOutcome outcome;
};

/// C_A = M_A ^ K_A ^ K_AB ^ K_AT, C_B = M_B ^ K_B ^ K_AB ^ K_BT,
/// R = C_A ^ C_B ^ C_TP ^ K_AT ^ K_BT.
Comparison compare(const BitString& m_a, const BitString& m_b, const BitString& k_a, const BitString& k_b,
                   const BitString& k_ab, const BitString& k_at, const BitString& k_bt,
                   const std::vector<BellState>& retained_choices);

struct Options {
  std::size_t n = 1;
  double case1_tolerance = 0.0;
  std::size_t max_attempts = 1000;
  ChannelNoise noise;  // applied on the forward and on the return leg
};

struct Run {
  ComparisonOutcome outcome = Equal{};
  ProtocolTranscript transcript;
  std::size_t attempts = 0;
  // The rest describes the last attempt.
  std::vector<BellState> bell_choices;
  std::optional<PartyPhase> alice;
  std::optional<PartyPhase> bob;
  std::vector<int> announcements;
  std::optional<Sift> sifted;
  std::optional<Audit> audit;
  BitString k_ab;
  BitString k_at;
  BitString k_bt;
  std::optional<Comparison> comparison;
};

/// Executes SQ1..SQ9. A Case-4 yield below 2N restarts from SQ1 with a
/// derived context (logged as a restart event); after max_attempts the run
/// aborts with a yield shortfall.
Run run(const BitString& m_a, const BitString& m_b, const Options& options, RunContext& ctx,
        Adversary* adversary = nullptr);

}  // namespace qpc::sqpc

#endif  // QPC_SQPC_HPP
