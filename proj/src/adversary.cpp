#include "qpc/adversary.hpp"

#include <json.hpp>

#include <thread>

#include "qpc/format.hpp"

namespace qpc {

namespace {

struct AttackName {
  AttackKind kind;
  std::string_view tag;
};

constexpr AttackName kAttackNames[] = {
    {AttackKind::None, "none"},
    {AttackKind::InterceptResendComputational, "intercept-resend"},
    {AttackKind::FullRandomizeBell, "randomize-bell"},
    {AttackKind::PauliIYOnAliceArm, "iy-alice"},
    {AttackKind::MemoryAttackByAlice, "memory-alice"},
    {AttackKind::MemoryAttackInterceptReturns, "memory-returns"},
};

bool is_memory_attack(AttackKind k) {
  return k == AttackKind::MemoryAttackByAlice || k == AttackKind::MemoryAttackInterceptReturns;
}

bool targets(const AttackStrategy& s, Arm arm) { return arm == Arm::Alice ? s.alice_arm : s.bob_arm; }

std::vector<ClassicalAction> random_plan(std::size_t count, Rng& rng) {
  std::vector<ClassicalAction> plan(count, ClassicalAction::Reflect);
  for (std::size_t i : rng.choose(count, count / 2)) plan[i] = ClassicalAction::Measure;
  return plan;
}

}  // namespace

std::string_view to_string(AttackKind k) {
  for (const auto& a : kAttackNames) {
    if (a.kind == k) return a.tag;
  }
  return "?";
}

AttackKind attack_kind_from_string(std::string_view tag) {
  for (const auto& a : kAttackNames) {
    if (a.tag == tag) return a.kind;
  }
  std::string known;
  for (const auto& a : kAttackNames) known += (known.empty() ? "" : ", ") + std::string(a.tag);
  throw std::invalid_argument("unknown attack '" + std::string(tag) + "' (expected one of " + known + ")");
}

void AttackStrategy::validate(Protocol protocol) const {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("attack fraction must lie in [0, 1]");
  if (!alice_arm && !bob_arm) throw std::invalid_argument("attack must target at least one arm");
  if (protocol == Protocol::Osb && is_memory_attack(kind)) {
    throw std::invalid_argument(std::string(to_string(kind)) + " applies only to the semi-quantum protocol");
  }
}

AttackStrategy attack_from_string(std::string_view spec) {
  AttackStrategy s;
  std::string_view name = spec;
  if (auto colon = spec.find(':'); colon != std::string_view::npos) {
    name = spec.substr(0, colon);
    s.fraction = parse_double(spec.substr(colon + 1));
  }
  if (auto at = name.find('@'); at != std::string_view::npos) {
    const std::string_view arm = name.substr(at + 1);
    name = name.substr(0, at);
    if (arm == "alice") {
      s.bob_arm = false;
    } else if (arm == "bob") {
      s.alice_arm = false;
    } else if (arm != "both") {
      throw std::invalid_argument("unknown arm '" + std::string(arm) + "' (expected alice, bob or both)");
    }
  }
  s.kind = attack_kind_from_string(name);
  if (!(s.fraction >= 0.0 && s.fraction <= 1.0)) throw std::invalid_argument("attack fraction must lie in [0, 1]");
  return s;
}

std::string to_string(const AttackStrategy& s) {
  std::string out(to_string(s.kind));
  if (!(s.alice_arm && s.bob_arm)) out += s.alice_arm ? "@alice" : "@bob";
  return out + ":" + format_double(s.fraction);
}

std::optional<int> Attacker::known_bit(Arm arm, std::size_t pair) const {
  const auto& m = known_[arm == Arm::Alice ? 0 : 1];
  auto it = m.find(pair);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

void InterceptResendComputational::forward(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs,
                                           RunContext& ctx) {
  if (!targets(s_, arm)) return;
  Rng& select = ctx.stream(Stream::EavesdropperSelection);
  Rng& eve = ctx.stream(Stream::Eavesdropper);
  for (const QubitRef& q : sequence) {
    if (!select.bernoulli(s_.fraction)) continue;
    auto m = measure_qubit(pairs.at(q.pair), q.slot, eve);
    pairs[q.pair] = m.collapsed;
    learn(q.slot == Slot::First ? Arm::Alice : Arm::Bob, q.pair, m.bit);
  }
}

void FullRandomizeBell::reset() {
  Attacker::reset();
  seen_.clear();
}

void FullRandomizeBell::forward(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs, RunContext& ctx) {
  if (!targets(s_, arm)) return;
  std::map<std::size_t, int> here;
  for (const QubitRef& q : sequence) ++here[q.pair];
  Rng& select = ctx.stream(Stream::EavesdropperSelection);
  Rng& eve = ctx.stream(Stream::Eavesdropper);
  for (const QubitRef& q : sequence) {
    if (!seen_.insert(q.pair).second) continue;
    const bool local = here[q.pair] == 2 || (s_.alice_arm && s_.bob_arm);
    if (!local || !select.bernoulli(s_.fraction)) continue;
    pairs.at(q.pair) = bell_density(kAllBellStates[eve.below(4)]);
  }
}

void PauliIYOnAliceArm::forward(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs, RunContext& ctx) {
  if (arm != Arm::Alice) return;
  Rng& select = ctx.stream(Stream::EavesdropperSelection);
  const Matrix2 iy = pauli_iy();
  for (const QubitRef& q : sequence) {
    if (!select.bernoulli(s_.fraction)) continue;
    pairs.at(q.pair) = single_qubit_apply(pairs[q.pair], iy, q.slot);
  }
}

void MemoryAttackByAlice::reset() {
  Attacker::reset();
  plan_.clear();
  memory_.clear();
}

const std::vector<ClassicalAction>& MemoryAttackByAlice::plan_for(std::size_t count, RunContext& ctx) {
  if (plan_.size() != count) plan_ = random_plan(count, ctx.stream(Stream::Eavesdropper));
  return plan_;
}

std::optional<std::vector<ClassicalAction>> MemoryAttackByAlice::alice_plan(std::size_t count, RunContext& ctx) {
  return plan_for(count, ctx);
}

void MemoryAttackByAlice::forward(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs, RunContext& ctx) {
  if (arm != Arm::Bob) return;
  const auto& plan = plan_for(sequence.size(), ctx);
  Rng& select = ctx.stream(Stream::EavesdropperSelection);
  Rng& eve = ctx.stream(Stream::Eavesdropper);
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const QubitRef& q = sequence[i];
    if (!select.bernoulli(s_.fraction)) continue;
    DensityMatrix& rho = pairs.at(q.pair);
    if (plan[i] == ClassicalAction::Measure) {
      auto m = measure_qubit(rho, q.slot, eve);
      rho = m.collapsed;
      learn(Arm::Bob, q.pair, m.bit);
    } else {
      memory_[q.pair] = rho;
      // Bob gets |0>; Alice's half keeps its reduced state.
      Matrix2 kept = Matrix2::Zero();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          kept(a, b) = q.slot == Slot::Second ? rho(2 * a, 2 * b) + rho(2 * a + 1, 2 * b + 1)
                                              : rho(a, b) + rho(2 + a, 2 + b);
      Matrix2 zero = Matrix2::Zero();
      zero(0, 0) = 1;
      rho = q.slot == Slot::Second ? kron(kept, zero) : kron(zero, kept);
    }
  }
}

void MemoryAttackByAlice::returned(Arm arm, std::span<const QubitRef> /*sequence*/, PairStates& pairs,
                                   RunContext& /*ctx*/) {
  if (arm != Arm::Bob) return;
  for (const auto& [pair, rho] : memory_) pairs.at(pair) = rho;
  memory_.clear();
}

void MemoryAttackInterceptReturns::reset() {
  Attacker::reset();
  plan_.clear();
}

std::optional<std::vector<ClassicalAction>> MemoryAttackInterceptReturns::alice_plan(std::size_t count,
                                                                                     RunContext& ctx) {
  plan_ = random_plan(count, ctx.stream(Stream::Eavesdropper));
  return plan_;
}

void MemoryAttackInterceptReturns::returned(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs,
                                            RunContext& ctx) {
  if (arm != Arm::Bob || plan_.size() != sequence.size()) return;
  Rng& select = ctx.stream(Stream::EavesdropperSelection);
  Rng& eve = ctx.stream(Stream::Eavesdropper);
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (plan_[i] != ClassicalAction::Measure || !select.bernoulli(s_.fraction)) continue;
    const QubitRef& q = sequence[i];
    auto m = measure_qubit(pairs.at(q.pair), q.slot, eve);
    pairs[q.pair] = m.collapsed;
    learn(Arm::Bob, q.pair, m.bit);
  }
}

std::unique_ptr<Attacker> make_attacker(const AttackStrategy& s, Protocol protocol) {
  s.validate(protocol);
  switch (s.kind) {
    case AttackKind::None: return nullptr;
    case AttackKind::InterceptResendComputational: return std::make_unique<InterceptResendComputational>(s);
    case AttackKind::FullRandomizeBell: return std::make_unique<FullRandomizeBell>(s);
    case AttackKind::PauliIYOnAliceArm: return std::make_unique<PauliIYOnAliceArm>(s);
    case AttackKind::MemoryAttackByAlice: return std::make_unique<MemoryAttackByAlice>(s);
    case AttackKind::MemoryAttackInterceptReturns: return std::make_unique<MemoryAttackInterceptReturns>(s);
  }
  return nullptr;
}

namespace {

std::size_t count_known(const Attacker* eve, Arm arm, const std::vector<std::size_t>& pairs, const BitString& key) {
  if (!eve) return 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto b = eve->known_bit(arm, pairs[i]);
    if (b && *b == key[i]) ++hits;
  }
  return hits;
}

void score(AttackReport& rep, const ComparisonOutcome& expected) {
  if (rep.outcome.is_aborted()) {
    const Aborted& a = rep.outcome.aborted();
    if (a.reason != AbortReason::YieldShortfall) {
      rep.detected = true;
      rep.detection_stage = a.stage;
    }
  } else {
    rep.verdict_corrupted = !(rep.outcome == expected);
  }
}

}  // namespace

AttackReport run_trial(const CampaignConfig& config, std::size_t trial) {
  config.strategy.validate(config.protocol);
  RunContext ctx(mix_seed(config.seed, trial));
  const BitString m_a = config.m_a ? *config.m_a : BitString::random(config.n, ctx.stream(Stream::Harness));
  const BitString m_b = config.m_b ? *config.m_b : BitString::random(config.n, ctx.stream(Stream::Harness));
  auto eve = make_attacker(config.strategy, config.protocol);
  const ComparisonOutcome expected = ComparisonOutcome::from_result(m_a ^ m_b);

  AttackReport rep;
  if (config.protocol == Protocol::Osb) {
    osb::Options opt;
    opt.n = config.n;
    opt.gv_tolerance = config.tolerance;
    opt.check_fraction = config.check_fraction;
    opt.noise = config.noise;
    osb::Run r = osb::run(m_a, m_b, opt, ctx, eve.get());
    rep.outcome = r.outcome;
    score(rep, expected);
    if (!rep.outcome.is_aborted()) {
      const auto& c = *r.correlation;
      rep.eve_key_bits_recovered = std::max(count_known(eve.get(), Arm::Alice, c.retained, c.k_a),
                                            count_known(eve.get(), Arm::Bob, c.retained, c.k_b));
    }
  } else {
    sqpc::Options opt;
    opt.n = config.n;
    opt.case1_tolerance = config.tolerance;
    opt.noise = config.noise;
    sqpc::Run r = sqpc::run(m_a, m_b, opt, ctx, eve.get());
    rep.outcome = r.outcome;
    rep.attempts = r.attempts;
    score(rep, expected);
    if (r.sifted) {
      rep.case1_pairs = r.sifted->case1.size();
      rep.case1_mismatches = r.sifted->case1_errors;
    }
    if (!rep.outcome.is_aborted()) {
      const auto& a = *r.audit;
      rep.eve_key_bits_recovered = std::max(count_known(eve.get(), Arm::Alice, a.retained, a.k_a),
                                            count_known(eve.get(), Arm::Bob, a.retained, a.k_b));
    }
  }
  return rep;
}

AttackStatistics aggregate(const CampaignConfig& config, const std::vector<AttackReport>& reports) {
  AttackStatistics s;
  s.protocol = config.protocol;
  s.strategy = config.strategy;
  s.n = config.n;
  s.trials = reports.size();
  for (const auto& r : reports) {
    if (r.detected) {
      ++s.detected;
      ++s.detections_by_stage[*r.detection_stage];
    }
    if (!r.outcome.is_aborted()) ++s.completed;
    if (r.verdict_corrupted) ++s.verdict_corrupted;
    s.key_bits_recovered += r.eve_key_bits_recovered;
    s.case1_pairs += r.case1_pairs;
    s.case1_mismatches += r.case1_mismatches;
  }
  return s;
}

AttackStatistics run_with_attack(const CampaignConfig& config, std::vector<AttackReport>* reports) {
  config.strategy.validate(config.protocol);
  std::vector<AttackReport> out(config.trials);
  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.trials; ++i) out[i] = run_trial(config, i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < config.trials; i += workers) out[i] = run_trial(config, i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  AttackStatistics s = aggregate(config, out);
  if (reports) *reports = std::move(out);
  return s;
}

double AttackStatistics::detection_rate() const {
  return trials ? static_cast<double>(detected) / static_cast<double>(trials) : 0.0;
}

double AttackStatistics::stage_detection_rate(Stage st) const {
  auto it = detections_by_stage.find(st);
  if (it == detections_by_stage.end() || trials == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(trials);
}

double AttackStatistics::mean_key_bits_recovered() const {
  return completed ? static_cast<double>(key_bits_recovered) / static_cast<double>(completed) : 0.0;
}

double AttackStatistics::case1_mismatch_rate() const {
  return case1_pairs ? static_cast<double>(case1_mismatches) / static_cast<double>(case1_pairs) : 0.0;
}

ComparisonOutcome iy_attack_consequence(const BitString& m_a, const BitString& m_b) {
  return ComparisonOutcome::from_result((m_a ^ m_b).complement());
}

std::size_t eve_information_bound(const ObserverView& view, Target target) {
  const std::size_t n = view.n;
  if (n == 0) throw std::invalid_argument("eve_information_bound: N must be at least 1");
  if (n > kMaxEnumerationBits) {
    throw std::invalid_argument("eve_information_bound: N=" + std::to_string(n) + " exceeds the enumeration limit " +
                                std::to_string(kMaxEnumerationBits));
  }
  const auto check_len = [n](const std::optional<BitString>& b) {
    if (b && b->size() != n) throw ProtocolError("eve_information_bound: view string of wrong length");
  };
  if (view.c_a.size() != n || view.c_b.size() != n) throw ProtocolError("eve_information_bound: C_A/C_B length");
  for (const auto* b : {&view.c_tp, &view.r, &view.m_a, &view.m_b, &view.k_a, &view.k_b, &view.k_ab, &view.k_at,
                        &view.k_bt})
    check_len(*b);
  const bool sq = view.protocol == Protocol::Sqpc;

  // allowed[i][v]: target bit v is possible at position i.
  std::vector<std::array<bool, 2>> allowed(n, {false, false});
  for (std::size_t i = 0; i < n; ++i) {
    const auto fits = [i](const std::optional<BitString>& known, int v) { return !known || (*known)[i] == v; };
    for (unsigned a = 0; a < 256; ++a) {
      const int ma = a & 1, mb = (a >> 1) & 1, ka = (a >> 2) & 1, kb = (a >> 3) & 1, kab = (a >> 4) & 1;
      const int kat = sq ? (a >> 5) & 1 : 0;
      const int kbt = sq ? (a >> 6) & 1 : 0;
      const int ctp = (a >> 7) & 1;
      if (!sq && (a & 0x60)) continue;
      if (!fits(view.m_a, ma) || !fits(view.m_b, mb) || !fits(view.k_a, ka) || !fits(view.k_b, kb) ||
          !fits(view.k_ab, kab) || !fits(view.k_at, kat) || !fits(view.k_bt, kbt) || !fits(view.c_tp, ctp))
        continue;
      if ((ma ^ ka ^ kab ^ kat) != view.c_a[i] || (mb ^ kb ^ kab ^ kbt) != view.c_b[i]) continue;
      if ((ka ^ kb) != ctp) continue;
      if (view.r && (view.c_a[i] ^ view.c_b[i] ^ ctp ^ kat ^ kbt) != (*view.r)[i]) continue;
      allowed[i][target == Target::MessageA ? ma : mb] = true;
    }
  }
  std::size_t support = 0;
  for (std::uint64_t cand = 0; cand < (std::uint64_t{1} << n); ++cand) {
    const BitString m = BitString::from_integer(cand, n);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = allowed[i][m[i]];
    if (ok) ++support;
  }
  return support;
}

ObserverView tp_view(const osb::Run& run) {
  if (!run.comparison) throw ProtocolError("tp_view: run did not complete");
  ObserverView v;
  v.protocol = Protocol::Osb;
  v.n = run.comparison->c_a.size();
  v.c_a = run.comparison->c_a;
  v.c_b = run.comparison->c_b;
  v.c_tp = run.comparison->c_tp;
  v.r = run.comparison->r;
  return v;
}

ObserverView outsider_view(const osb::Run& run) {
  if (!run.comparison) throw ProtocolError("outsider_view: run did not complete");
  ObserverView v;
  v.protocol = Protocol::Osb;
  v.n = run.comparison->c_a.size();
  v.c_a = run.comparison->c_a;
  v.c_b = run.comparison->c_b;
  return v;
}

ObserverView alice_view(const sqpc::Run& run, const BitString& m_a, const BitString& stolen_k_b) {
  if (!run.comparison || !run.audit) throw ProtocolError("alice_view: run did not complete");
  ObserverView v;
  v.protocol = Protocol::Sqpc;
  v.n = m_a.size();
  v.c_a = run.comparison->c_a;
  v.c_b = run.comparison->c_b;
  v.m_a = m_a;
  v.k_a = run.audit->k_a;
  v.k_b = stolen_k_b;
  v.k_ab = run.k_ab;
  v.k_at = run.k_at;
  return v;
}

namespace {

std::string stage_counts(const AttackStatistics& s) {
  std::string out;
  for (const auto& [stage, count] : s.detections_by_stage) {
    if (!out.empty()) out += ';';
    out += std::string(to_string(stage)) + ":" + std::to_string(count);
  }
  return out;
}

}  // namespace

std::string to_csv(const std::vector<AttackStatistics>& rows) {
  std::string out =
      "protocol,attack,n,trials,detected,detection_rate,detections_by_stage,completed,verdict_corrupted,"
      "mean_key_bits_recovered,case1_pairs,case1_mismatches,case1_mismatch_rate\n";
  for (const auto& s : rows) {
    out += std::string(to_string(s.protocol)) + ',' + to_string(s.strategy) + ',' + std::to_string(s.n) + ',' +
           std::to_string(s.trials) + ',' + std::to_string(s.detected) + ',' + format_double(s.detection_rate()) +
           ',' + stage_counts(s) + ',' + std::to_string(s.completed) + ',' + std::to_string(s.verdict_corrupted) +
           ',' + format_double(s.mean_key_bits_recovered()) + ',' + std::to_string(s.case1_pairs) + ',' +
           std::to_string(s.case1_mismatches) + ',' + format_double(s.case1_mismatch_rate()) + '\n';
  }
  return out;
}

std::string to_jsonl(const std::vector<AttackStatistics>& rows) {
  std::string out;
  for (const auto& s : rows) {
    nlohmann::ordered_json j;
    j["protocol"] = to_string(s.protocol);
    j["attack"] = to_string(s.strategy);
    j["n"] = s.n;
    j["trials"] = s.trials;
    j["detected"] = s.detected;
    j["detection_rate"] = s.detection_rate();
    nlohmann::ordered_json stages = nlohmann::ordered_json::object();
    for (const auto& [stage, count] : s.detections_by_stage) stages[std::string(to_string(stage))] = count;
    j["detections_by_stage"] = stages;
    j["completed"] = s.completed;
    j["verdict_corrupted"] = s.verdict_corrupted;
    j["mean_key_bits_recovered"] = s.mean_key_bits_recovered();
    j["case1_pairs"] = s.case1_pairs;
    j["case1_mismatches"] = s.case1_mismatches;
    j["case1_mismatch_rate"] = s.case1_mismatch_rate();
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace qpc
