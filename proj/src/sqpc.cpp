#include "qpc/sqpc.hpp"

#include <set>
#include <sstream>

namespace qpc::sqpc {

Preparation prepare(std::size_t n, Rng& tp) {
  if (n == 0) throw std::invalid_argument("sqpc::prepare: N must be at least 1");
  Preparation prep;
  for (std::size_t i = 0; i < 8 * n; ++i) {
    const BellState s = kAllBellStates[tp.below(4)];
    prep.bell_choices.push_back(s);
    prep.states.push_back(bell_density(s));
    prep.s_a.push_back({i, Slot::First});
    prep.s_b.push_back({i, Slot::Second});
  }
  return prep;
}

PartyPhase classical_party_phase(std::span<const QubitRef> sequence, PairStates& pairs, Rng& rng,
                                 const std::optional<std::vector<ClassicalAction>>& plan) {
  const std::size_t total = sequence.size();
  PartyPhase out;
  if (plan) {
    if (plan->size() != total) throw ProtocolError("classical_party_phase: plan length differs from sequence");
    out.actions = *plan;
  } else {
    out.actions.assign(total, ClassicalAction::Reflect);
    for (std::size_t i : rng.choose(total, total / 2)) out.actions[i] = ClassicalAction::Measure;
  }
  out.bits = BitString(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (out.actions[i] != ClassicalAction::Measure) continue;
    auto& rho = pairs.at(sequence[i].pair);
    auto m = measure_qubit(rho, sequence[i].slot, rng);
    rho = m.collapsed;
    out.bits.set(i, m.bit);
    out.measured.push_back(i);
  }
  return out;
}

std::vector<int> tp_bell_phase(PairStates& pairs, const std::vector<BellState>& bell_choices, Rng& tp) {
  if (pairs.size() < bell_choices.size()) throw ProtocolError("tp_bell_phase: missing pairs");
  std::vector<int> out;
  out.reserve(bell_choices.size());
  for (std::size_t i = 0; i < bell_choices.size(); ++i) {
    const BellState outcome = measure_bell(pairs[i], tp);
    pairs[i] = bell_density(outcome);
    out.push_back(outcome == bell_choices[i] ? 0 : 1);
  }
  return out;
}

std::string_view to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::Case1: return "case1";
    case CaseLabel::Case2: return "case2";
    case CaseLabel::Case3: return "case3";
    case CaseLabel::Case4: return "case4";
  }
  return "?";
}

CaseLabel case_label(ClassicalAction alice, ClassicalAction bob) {
  const bool ma = alice == ClassicalAction::Measure;
  const bool mb = bob == ClassicalAction::Measure;
  if (!ma && !mb) return CaseLabel::Case1;
  if (ma && !mb) return CaseLabel::Case2;
  if (!ma && mb) return CaseLabel::Case3;
  return CaseLabel::Case4;
}

Sift sift(const PartyPhase& alice, const PartyPhase& bob, const std::vector<int>& announcements, double tolerance) {
  const std::size_t total = announcements.size();
  if (alice.actions.size() != total || bob.actions.size() != total) {
    throw ProtocolError("sift: action lists and announcements differ in length");
  }
  Sift out;
  for (std::size_t i = 0; i < total; ++i) {
    const CaseLabel c = case_label(alice.actions[i], bob.actions[i]);
    out.labels.push_back(c);
    if (c == CaseLabel::Case1) {
      out.case1.push_back(i);
      if (announcements[i] != 0) ++out.case1_errors;
    } else if (c == CaseLabel::Case4) {
      out.case4.push_back(i);
      out.k_a2n.push_back(alice.bits[i]);
      out.k_b2n.push_back(bob.bits[i]);
    }
  }
  if (!out.case1.empty()) {
    out.case1_error_rate = static_cast<double>(out.case1_errors) / static_cast<double>(out.case1.size());
  }
  if (out.case1_error_rate > tolerance) {
    out.abort = Aborted{Stage::Sq5, AbortReason::ErrorRateExceeded, out.case1_error_rate,
                        std::to_string(out.case1_errors) + " of " + std::to_string(out.case1.size()) +
                            " Case-1 pairs disturbed"};
  }
  return out;
}

Audit parity_audit(const Sift& sifted, const std::vector<BellState>& bell_choices, std::size_t n, Rng& users) {
  const std::size_t yield = sifted.case4.size();
  Audit out;
  if (yield < 2 * n) {
    out.abort = Aborted{Stage::Sq6, AbortReason::YieldShortfall, 0.0,
                        std::to_string(yield) + " Case-4 pairs, " + std::to_string(2 * n) + " needed"};
    return out;
  }
  out.disclosed = users.choose(yield, n);
  std::size_t violations = 0;
  for (std::size_t j : out.disclosed) {
    const BellState choice = bell_choices.at(sifted.case4[j]);
    out.disclosed_choices.push_back(choice);
    if ((sifted.k_a2n[j] ^ sifted.k_b2n[j]) != parity(choice)) ++violations;
  }
  if (violations > 0) {
    out.abort = Aborted{Stage::Sq6, AbortReason::ParityViolation,
                        static_cast<double>(violations) / static_cast<double>(n),
                        std::to_string(violations) + " of " + std::to_string(n) +
                            " disclosed positions violate parity"};
    return out;
  }
  std::set<std::size_t> used(out.disclosed.begin(), out.disclosed.end());
  for (std::size_t j = 0; j < yield && out.retained.size() < n; ++j) {
    if (used.count(j)) continue;
    out.retained.push_back(sifted.case4[j]);
    out.k_a.push_back(sifted.k_a2n[j]);
    out.k_b.push_back(sifted.k_b2n[j]);
  }
  return out;
}

Comparison compare(const BitString& m_a, const BitString& m_b, const BitString& k_a, const BitString& k_b,
                   const BitString& k_ab, const BitString& k_at, const BitString& k_bt,
                   const std::vector<BellState>& retained_choices) {
  const std::size_t n = m_a.size();
  if (m_b.size() != n || k_a.size() != n || k_b.size() != n || k_ab.size() != n || k_at.size() != n ||
      k_bt.size() != n || retained_choices.size() != n) {
    throw ProtocolError("sqpc::compare: all strings must have length N");
  }
  BitString c_tp(n);
  for (std::size_t i = 0; i < n; ++i) c_tp.set(i, parity(retained_choices[i]));
  BitString c_a = m_a ^ k_a ^ k_ab ^ k_at;
  BitString c_b = m_b ^ k_b ^ k_ab ^ k_bt;
  BitString r = c_a ^ c_b ^ c_tp ^ k_at ^ k_bt;
  ComparisonOutcome outcome = ComparisonOutcome::from_result(r);
  return {std::move(c_a), std::move(c_b), std::move(c_tp), std::move(r), std::move(outcome)};
}

namespace {

std::string bits_payload(const std::vector<int>& v) {
  std::string out;
  for (int b : v) out.push_back(static_cast<char>('0' + b));
  return out;
}

std::string bits_payload(const BitString& b, const std::vector<std::size_t>& at) {
  std::string out;
  for (std::size_t j : at) out.push_back(static_cast<char>('0' + b[j]));
  return out;
}

}  // namespace

Run run(const BitString& m_a, const BitString& m_b, const Options& options, RunContext& ctx,
        Adversary* adversary) {
  const std::size_t n = options.n;
  if (n == 0) throw std::invalid_argument("sqpc::run: N must be at least 1");
  if (m_a.size() != n || m_b.size() != n) throw ProtocolError("sqpc::run: messages must have N bits");
  if (options.max_attempts == 0) throw std::invalid_argument("sqpc::run: max_attempts must be positive");

  Run out;
  auto& log = out.transcript;

  for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
    std::optional<RunContext> derived;
    RunContext& c = attempt == 0 ? ctx : derived.emplace(ctx.derive(attempt));
    Rng& tp = c.stream(Stream::ThirdParty);
    out.attempts = attempt + 1;
    out.alice.reset();
    out.bob.reset();
    out.sifted.reset();
    out.audit.reset();
    if (adversary) adversary->reset();

    // SQ1-SQ2
    Preparation prep = prepare(n, tp);
    out.bell_choices = prep.bell_choices;
    PairStates& states = prep.states;
    log.record(Stage::Sq1, Party::ThirdParty, EventKind::Prepare, std::to_string(8 * n) + " Bell pairs", 16 * n);
    log.record(Stage::Sq2, Party::ThirdParty, EventKind::QuantumSend,
               "S_A to Alice (" + std::to_string(8 * n) + " qubits)");
    log.record(Stage::Sq2, Party::ThirdParty, EventKind::QuantumSend,
               "S_B to Bob (" + std::to_string(8 * n) + " qubits)");
    if (adversary) {
      adversary->forward(Arm::Alice, prep.s_a, states, c);
      adversary->forward(Arm::Bob, prep.s_b, states, c);
    }
    options.noise.apply(Arm::Alice, prep.s_a, states);
    options.noise.apply(Arm::Bob, prep.s_b, states);

    // SQ3
    std::optional<std::vector<ClassicalAction>> plan;
    if (adversary) plan = adversary->alice_plan(8 * n, c);
    out.alice = classical_party_phase(prep.s_a, states, c.stream(Stream::Alice), plan);
    out.bob = classical_party_phase(prep.s_b, states, c.stream(Stream::Bob));
    log.record(Stage::Sq3, Party::Alice, EventKind::Measurement,
               "measure-resend " + std::to_string(out.alice->measured.size()) + " of " + std::to_string(8 * n),
               out.alice->measured.size());
    log.record(Stage::Sq3, Party::Bob, EventKind::Measurement,
               "measure-resend " + std::to_string(out.bob->measured.size()) + " of " + std::to_string(8 * n),
               out.bob->measured.size());
    log.record(Stage::Sq3, Party::Alice, EventKind::QuantumSend, "S_A back to TP");
    log.record(Stage::Sq3, Party::Bob, EventKind::QuantumSend, "S_B back to TP");
    if (adversary) {
      adversary->returned(Arm::Alice, prep.s_a, states, c);
      adversary->returned(Arm::Bob, prep.s_b, states, c);
    }
    options.noise.apply(Arm::Alice, prep.s_a, states);
    options.noise.apply(Arm::Bob, prep.s_b, states);

    // SQ4
    out.announcements = tp_bell_phase(states, out.bell_choices, tp);
    log.record(Stage::Sq4, Party::ThirdParty, EventKind::Measurement,
               "Bell basis on " + std::to_string(8 * n) + " pairs");
    log.record(Stage::Sq4, Party::ThirdParty, EventKind::Announce, bits_payload(out.announcements), 0, 8 * n);

    // SQ5
    log.record(Stage::Sq5, Party::Alice, EventKind::Announce, join_positions(out.alice->measured), 0,
               out.alice->measured.size());
    log.record(Stage::Sq5, Party::Bob, EventKind::Announce, join_positions(out.bob->measured), 0,
               out.bob->measured.size());
    out.sifted = sift(*out.alice, *out.bob, out.announcements, options.case1_tolerance);
    const Sift& s = *out.sifted;
    {
      std::ostringstream rate;
      rate << "Case-1 error rate " << s.case1_error_rate << " over " << s.case1.size() << " pairs";
      log.record(Stage::Sq5, Party::Alice, EventKind::Check, rate.str());
    }
    if (!s.passed()) {
      out.outcome = *s.abort;
      log.record(Stage::Sq5, Party::Alice, EventKind::Abort, out.outcome.summary());
      return out;
    }

    // SQ6
    out.audit = parity_audit(s, out.bell_choices, n, c.stream(Stream::Alice));
    const Audit& a = *out.audit;
    if (!a.passed() && a.abort->reason == AbortReason::YieldShortfall) {
      if (attempt + 1 < options.max_attempts) {
        log.record(Stage::Sq6, Party::Alice, EventKind::Restart, a.abort->detail);
        continue;
      }
      out.outcome = *a.abort;
      log.record(Stage::Sq6, Party::Alice, EventKind::Abort, out.outcome.summary());
      return out;
    }
    std::vector<std::size_t> disclosed_pairs;
    for (std::size_t j : a.disclosed) disclosed_pairs.push_back(s.case4[j]);
    log.record(Stage::Sq6, Party::Alice, EventKind::Announce, join_positions(disclosed_pairs));
    log.record(Stage::Sq6, Party::ThirdParty, EventKind::Announce, join_bell_states(a.disclosed_choices));
    log.record(Stage::Sq6, Party::Alice, EventKind::Announce, bits_payload(s.k_a2n, a.disclosed));
    log.record(Stage::Sq6, Party::Bob, EventKind::Announce, bits_payload(s.k_b2n, a.disclosed));
    if (!a.passed()) {
      out.outcome = *a.abort;
      log.record(Stage::Sq6, Party::Alice, EventKind::Abort, out.outcome.summary());
      return out;
    }
    log.record(Stage::Sq6, Party::Alice, EventKind::Check, std::to_string(n) + " disclosed positions consistent");

    // SQ7-SQ9
    Rng& oracle = c.stream(Stream::KeyOracle);
    out.k_ab = ideal_key(n, oracle);
    out.k_at = ideal_key(n, oracle);
    out.k_bt = ideal_key(n, oracle);
    log.record(Stage::Sq7, Party::KeyOracle, EventKind::KeyEstablished,
               "K_AB (" + std::to_string(n) + " bits) to Alice and Bob");
    log.record(Stage::Sq7, Party::KeyOracle, EventKind::KeyEstablished,
               "K_AT (" + std::to_string(n) + " bits) to Alice and TP");
    log.record(Stage::Sq7, Party::KeyOracle, EventKind::KeyEstablished,
               "K_BT (" + std::to_string(n) + " bits) to Bob and TP");
    std::vector<BellState> retained_choices;
    for (std::size_t i : a.retained) retained_choices.push_back(out.bell_choices[i]);
    Comparison cmp = compare(m_a, m_b, a.k_a, a.k_b, out.k_ab, out.k_at, out.k_bt, retained_choices);
    log.record(Stage::Sq7, Party::Alice, EventKind::Announce, cmp.c_a.to_binary(), 0, n);
    log.record(Stage::Sq7, Party::Bob, EventKind::Announce, cmp.c_b.to_binary(), 0, n);
    log.record(Stage::Sq9, Party::ThirdParty, EventKind::Verdict, cmp.outcome.is_equal() ? "equal" : "unequal", 0,
               1);
    out.outcome = cmp.outcome;
    out.comparison = std::move(cmp);
    return out;
  }
  return out;  // unreachable: the last attempt always returns
}

}  // namespace qpc::sqpc
