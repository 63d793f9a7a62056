#include "qpc/osb.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace qpc::osb {

Preparation prepare(std::size_t n, Rng& tp) {
  if (n == 0) throw std::invalid_argument("osb::prepare: N must be at least 1");
  Preparation prep;
  auto& reg = prep.registry;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const BellState s = kAllBellStates[tp.below(4)];
    prep.bell_choices.push_back(s);
    reg.records.push_back({PairRole::Message, s});
    reg.states.push_back(bell_density(s));
    reg.s_a.push_back({i, Slot::First});
    reg.s_b.push_back({i, Slot::Second});
  }
  return prep;
}

namespace {

EnlargedSequence enlarge(QubitRegistry& reg, const std::vector<QubitRef>& message, std::size_t n, Rng& tp) {
  std::vector<QubitRef> decoy_qubits;
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t id = reg.records.size();
    reg.records.push_back({PairRole::Decoy, BellState::PsiPlus});
    reg.states.push_back(bell_density(BellState::PsiPlus));
    decoy_qubits.push_back({id, Slot::First});
    decoy_qubits.push_back({id, Slot::Second});
  }
  const std::size_t total = message.size() + decoy_qubits.size();
  const std::vector<std::size_t> decoy_slots = tp.choose(total, decoy_qubits.size());

  EnlargedSequence out;
  out.qubits.reserve(total);
  std::size_t next_decoy = 0;
  std::size_t next_message = 0;
  for (std::size_t slot = 0; slot < total; ++slot) {
    if (next_decoy < decoy_slots.size() && decoy_slots[next_decoy] == slot) {
      out.qubits.push_back(decoy_qubits[next_decoy]);
      if (next_decoy % 2 == 1) out.decoys.push_back({decoy_slots[next_decoy - 1], slot});
      ++next_decoy;
    } else {
      out.qubits.push_back(message[next_message++]);
    }
  }
  return out;
}

std::optional<std::string> malformed_position_map(const QubitRegistry& reg, const EnlargedSequence& seq) {
  if (seq.decoys.empty()) return "no decoy positions disclosed";
  std::set<std::size_t> seen;
  for (const auto& d : seq.decoys) {
    if (d.first >= seq.qubits.size() || d.second >= seq.qubits.size()) return "decoy position out of range";
    if (!seen.insert(d.first).second || !seen.insert(d.second).second) return "decoy position repeated";
    const QubitRef& q1 = seq.qubits[d.first];
    const QubitRef& q2 = seq.qubits[d.second];
    if (q1.pair != q2.pair || q1.slot != Slot::First || q2.slot != Slot::Second) {
      return "positions " + std::to_string(d.first) + "," + std::to_string(d.second) + " are not one pair";
    }
    if (q1.pair >= reg.records.size() || reg.records[q1.pair].role != PairRole::Decoy) {
      return "position " + std::to_string(d.first) + " is not a decoy";
    }
  }
  return std::nullopt;
}

}  // namespace

EnlargedSequences insert_decoys(QubitRegistry& registry, std::size_t n, Rng& tp) {
  if (n == 0) throw std::invalid_argument("osb::insert_decoys: N must be at least 1");
  EnlargedSequences out;
  out.a = enlarge(registry, registry.s_a, n, tp);
  out.b = enlarge(registry, registry.s_b, n, tp);
  return out;
}

GvCheck gv_check(const QubitRegistry& registry, const EnlargedSequence& sequence, double tolerance,
                 Rng& receiver) {
  GvCheck check;
  if (auto problem = malformed_position_map(registry, sequence)) {
    check.abort = Aborted{Stage::Osb3, AbortReason::ProtocolError, 0.0, *problem};
    return check;
  }
  for (const auto& d : sequence.decoys) {
    const std::size_t pair = sequence.qubits[d.first].pair;
    const BellState outcome = measure_bell(registry.states[pair], receiver);
    check.outcomes.push_back(outcome);
    if (outcome != BellState::PsiPlus) ++check.errors;
  }
  check.decoys = sequence.decoys.size();
  check.error_rate = static_cast<double>(check.errors) / static_cast<double>(check.decoys);
  if (check.error_rate > tolerance) {
    check.abort = Aborted{Stage::Osb3, AbortReason::ErrorRateExceeded, check.error_rate, "decoy check failed"};
  }
  return check;
}

std::size_t checked_count(std::size_t n, double check_fraction) {
  if (!(check_fraction >= 0.0 && check_fraction <= 0.5)) {
    throw std::invalid_argument("check fraction must lie in [0, 0.5]");
  }
  if (check_fraction == 0.0) return 0;
  const auto c = static_cast<std::size_t>(std::llround(check_fraction * static_cast<double>(2 * n)));
  return std::min(n, std::max<std::size_t>(1, c));
}

Correlation measure_and_correlate(QubitRegistry& registry, const std::vector<BellState>& bell_choices,
                                  double check_fraction, Rng& alice, Rng& bob) {
  const std::size_t total = bell_choices.size();
  if (total == 0 || total % 2 != 0 || registry.s_a.size() != total || registry.s_b.size() != total) {
    throw ProtocolError("measure_and_correlate: expected 2N message pairs");
  }
  const std::size_t n = total / 2;

  BitString bits_a(total);
  BitString bits_b(total);
  for (std::size_t i = 0; i < total; ++i) {
    auto& rho = registry.states[registry.s_a[i].pair];
    auto ma = measure_qubit(rho, Slot::First, alice);
    auto mb = measure_qubit(ma.collapsed, Slot::Second, bob);
    rho = mb.collapsed;
    bits_a.set(i, ma.bit);
    bits_b.set(i, mb.bit);
  }

  Correlation out;
  out.checked = alice.choose(total, checked_count(n, check_fraction));
  std::size_t violations = 0;
  for (std::size_t i : out.checked) {
    out.checked_a.push_back(bits_a[i]);
    out.checked_b.push_back(bits_b[i]);
    out.checked_parities.push_back(parity(bell_choices[i]));
    if ((bits_a[i] ^ bits_b[i]) != parity(bell_choices[i])) ++violations;
  }
  if (violations > 0) {
    out.abort = Aborted{Stage::Osb4, AbortReason::ParityViolation,
                        static_cast<double>(violations) / static_cast<double>(out.checked.size()),
                        std::to_string(violations) + " of " + std::to_string(out.checked.size()) +
                            " checked coordinates violate parity"};
    return out;
  }
  std::set<std::size_t> sacrificed(out.checked.begin(), out.checked.end());
  for (std::size_t i = 0; i < total && out.retained.size() < n; ++i) {
    if (sacrificed.count(i)) continue;
    out.retained.push_back(i);
    out.k_a.push_back(bits_a[i]);
    out.k_b.push_back(bits_b[i]);
  }
  return out;
}

Comparison compare(const BitString& m_a, const BitString& m_b, const BitString& k_a, const BitString& k_b,
                   const BitString& k_ab, const std::vector<BellState>& retained_choices) {
  const std::size_t n = m_a.size();
  if (m_b.size() != n || k_a.size() != n || k_b.size() != n || k_ab.size() != n || retained_choices.size() != n) {
    throw ProtocolError("osb::compare: all strings must have length N");
  }
  BitString c_tp(n);
  for (std::size_t i = 0; i < n; ++i) c_tp.set(i, parity(retained_choices[i]));
  BitString c_a = m_a ^ k_a ^ k_ab;
  BitString c_b = m_b ^ k_b ^ k_ab;
  BitString r = c_a ^ c_b ^ c_tp;
  ComparisonOutcome outcome = ComparisonOutcome::from_result(r);
  return {std::move(c_a), std::move(c_b), std::move(c_tp), std::move(r), std::move(outcome)};
}

namespace {

std::string decoy_map_payload(const EnlargedSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.decoys.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(seq.decoys[i].first) + ":" + std::to_string(seq.decoys[i].second);
  }
  return out;
}

std::string bits_payload(const BitString& b) { return b.to_binary(); }

std::string parities_payload(const std::vector<int>& p) {
  std::string out;
  for (int v : p) out.push_back(static_cast<char>('0' + v));
  return out;
}

}  // namespace

Run run(const BitString& m_a, const BitString& m_b, const Options& options, RunContext& ctx,
        Adversary* adversary) {
  const std::size_t n = options.n;
  if (n == 0) throw std::invalid_argument("osb::run: N must be at least 1");
  if (m_a.size() != n || m_b.size() != n) throw ProtocolError("osb::run: messages must have N bits");

  Rng& tp = ctx.stream(Stream::ThirdParty);
  Run out;
  auto& log = out.transcript;
  if (adversary) adversary->reset();

  // OSB1
  Preparation prep = prepare(n, tp);
  out.bell_choices = prep.bell_choices;
  QubitRegistry& reg = prep.registry;
  log.record(Stage::Osb1, Party::ThirdParty, EventKind::Prepare, std::to_string(2 * n) + " Bell pairs", 4 * n);

  // OSB2
  EnlargedSequences seq = insert_decoys(reg, n, tp);
  log.record(Stage::Osb2, Party::ThirdParty, EventKind::Prepare,
             std::to_string(n) + " psi+ decoy pairs per sequence", 4 * n);
  log.record(Stage::Osb2, Party::ThirdParty, EventKind::QuantumSend,
             "S_A* to Alice (" + std::to_string(seq.a.qubits.size()) + " qubits)");
  log.record(Stage::Osb2, Party::ThirdParty, EventKind::QuantumSend,
             "S_B* to Bob (" + std::to_string(seq.b.qubits.size()) + " qubits)");
  if (adversary) {
    adversary->forward(Arm::Alice, seq.a.qubits, reg.states, ctx);
    adversary->forward(Arm::Bob, seq.b.qubits, reg.states, ctx);
  }
  options.noise.apply(Arm::Alice, seq.a.qubits, reg.states);
  options.noise.apply(Arm::Bob, seq.b.qubits, reg.states);

  // OSB3
  const auto run_gv = [&](const EnlargedSequence& s, Party receiver, Rng& rng) {
    log.record(Stage::Osb3, Party::ThirdParty, EventKind::Announce, decoy_map_payload(s));
    GvCheck gv = gv_check(reg, s, options.gv_tolerance, rng);
    if (!gv.outcomes.empty()) {
      log.record(Stage::Osb3, receiver, EventKind::Measurement,
                 "Bell basis on " + std::to_string(gv.outcomes.size()) + " decoy pairs");
      log.record(Stage::Osb3, receiver, EventKind::Announce, join_bell_states(gv.outcomes));
    }
    std::ostringstream rate;
    rate << "error rate " << gv.error_rate;
    log.record(Stage::Osb3, receiver, EventKind::Check, rate.str());
    return gv;
  };
  out.gv_a = run_gv(seq.a, Party::Alice, ctx.stream(Stream::Alice));
  if (!out.gv_a->passed()) {
    out.outcome = *out.gv_a->abort;
    log.record(Stage::Osb3, Party::Alice, EventKind::Abort, out.outcome.summary());
    return out;
  }
  out.gv_b = run_gv(seq.b, Party::Bob, ctx.stream(Stream::Bob));
  if (!out.gv_b->passed()) {
    out.outcome = *out.gv_b->abort;
    log.record(Stage::Osb3, Party::Bob, EventKind::Abort, out.outcome.summary());
    return out;
  }

  // OSB4
  Correlation corr = measure_and_correlate(reg, out.bell_choices, options.check_fraction,
                                           ctx.stream(Stream::Alice), ctx.stream(Stream::Bob));
  log.record(Stage::Osb4, Party::Alice, EventKind::Measurement,
             "computational basis on " + std::to_string(2 * n) + " qubits");
  log.record(Stage::Osb4, Party::Bob, EventKind::Measurement,
             "computational basis on " + std::to_string(2 * n) + " qubits");
  if (!corr.checked.empty()) {
    log.record(Stage::Osb4, Party::Alice, EventKind::Announce, join_positions(corr.checked));
    log.record(Stage::Osb4, Party::Alice, EventKind::Announce, bits_payload(corr.checked_a));
    log.record(Stage::Osb4, Party::Bob, EventKind::Announce, bits_payload(corr.checked_b));
    log.record(Stage::Osb4, Party::ThirdParty, EventKind::Announce, parities_payload(corr.checked_parities));
  }
  out.correlation = corr;
  if (!corr.passed()) {
    out.outcome = *corr.abort;
    log.record(Stage::Osb4, Party::Alice, EventKind::Abort, out.outcome.summary());
    return out;
  }
  log.record(Stage::Osb4, Party::Alice, EventKind::Check,
             std::to_string(corr.checked.size()) + " coordinates consistent");

  // OSB5
  out.k_ab = ideal_key(n, ctx.stream(Stream::KeyOracle));
  log.record(Stage::Osb5, Party::KeyOracle, EventKind::KeyEstablished,
             "K_AB (" + std::to_string(n) + " bits) to Alice and Bob");

  // OSB6-OSB8
  std::vector<BellState> retained_choices;
  for (std::size_t i : corr.retained) retained_choices.push_back(out.bell_choices[i]);
  Comparison cmp = compare(m_a, m_b, corr.k_a, corr.k_b, out.k_ab, retained_choices);
  log.record(Stage::Osb6, Party::Alice, EventKind::Announce, bits_payload(cmp.c_a), 0, n);
  log.record(Stage::Osb6, Party::Bob, EventKind::Announce, bits_payload(cmp.c_b), 0, n);
  log.record(Stage::Osb8, Party::ThirdParty, EventKind::Verdict, cmp.outcome.is_equal() ? "equal" : "unequal", 0,
             1);
  out.outcome = cmp.outcome;
  out.comparison = std::move(cmp);
  return out;
}

}  // namespace qpc::osb
