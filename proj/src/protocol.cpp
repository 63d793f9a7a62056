#include "qpc/protocol.hpp"

#include <json.hpp>

#include <array>
#include <sstream>

namespace qpc {

namespace {

constexpr std::array<std::string_view, 17> kStageNames = {
    "OSB1", "OSB2", "OSB3", "OSB4", "OSB5", "OSB6", "OSB7", "OSB8", "SQ1",
    "SQ2",  "SQ3",  "SQ4",  "SQ5",  "SQ6",  "SQ7",  "SQ8",  "SQ9"};

constexpr std::array<std::string_view, 5> kPartyNames = {"TP", "Alice", "Bob", "Eve", "KeyOracle"};

constexpr std::array<std::string_view, 9> kEventNames = {
    "prepare", "quantum-send", "measurement", "announce", "key-established",
    "check",   "verdict",      "abort",       "restart"};

template <typename E, std::size_t N>
E parse_enum(const std::array<std::string_view, N>& names, std::string_view tag, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == tag) return static_cast<E>(i);
  }
  throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(tag) + "'");
}

}  // namespace

std::string_view to_string(Protocol p) { return p == Protocol::Osb ? "osb" : "sqpc"; }

Protocol protocol_from_string(std::string_view tag) {
  if (tag == "osb") return Protocol::Osb;
  if (tag == "sqpc") return Protocol::Sqpc;
  throw std::invalid_argument("unknown protocol '" + std::string(tag) + "' (expected osb or sqpc)");
}

std::string_view to_string(Party p) { return kPartyNames[static_cast<std::size_t>(p)]; }

std::string_view to_string(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

Stage stage_from_string(std::string_view tag) { return parse_enum<Stage>(kStageNames, tag, "stage"); }

std::string_view to_string(AbortReason r) {
  switch (r) {
    case AbortReason::ErrorRateExceeded: return "error-rate-exceeded";
    case AbortReason::ParityViolation: return "parity-violation";
    case AbortReason::ProtocolError: return "protocol-error";
    case AbortReason::YieldShortfall: return "yield-shortfall";
  }
  return "?";
}

std::string_view to_string(EventKind k) { return kEventNames[static_cast<std::size_t>(k)]; }

ComparisonOutcome::ComparisonOutcome(Unequal u) : value_(std::move(u)) {
  if (std::get<Unequal>(value_).positions.empty()) {
    throw std::invalid_argument("Unequal verdict needs at least one differing position");
  }
}

ComparisonOutcome ComparisonOutcome::from_result(const BitString& r) {
  if (r.all_zero()) return Equal{};
  return Unequal{r.ones()};
}

std::string ComparisonOutcome::summary() const {
  if (is_equal()) return "equal";
  if (is_unequal()) return "unequal at " + join_positions(unequal().positions);
  const Aborted& a = aborted();
  std::ostringstream os;
  os << "aborted at " << to_string(a.stage) << " (" << to_string(a.reason) << ", error rate " << a.error_rate
     << ")";
  if (!a.detail.empty()) os << ": " << a.detail;
  return os.str();
}

void ProtocolTranscript::record(Stage stage, Party actor, EventKind kind, std::string payload, std::size_t qubits,
                                std::size_t decoding_bits) {
  events_.push_back({stage, actor, kind, std::move(payload), qubits, decoding_bits});
}

std::size_t ProtocolTranscript::qubits_prepared() const {
  std::size_t n = 0;
  for (const auto& e : events_) n += e.qubits;
  return n;
}

std::size_t ProtocolTranscript::decoding_bits() const {
  std::size_t n = 0;
  for (const auto& e : events_) n += e.decoding_bits;
  return n;
}

std::optional<std::string> ProtocolTranscript::announcement(Stage stage, Party actor) const {
  for (const auto& e : events_) {
    if (e.stage == stage && e.actor == actor && e.kind == EventKind::Announce) return e.payload;
  }
  return std::nullopt;
}

std::string ProtocolTranscript::to_jsonl() const {
  std::string out;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& e = events_[i];
    nlohmann::ordered_json j;
    j["seq"] = i;
    j["stage"] = to_string(e.stage);
    j["actor"] = to_string(e.actor);
    j["event"] = to_string(e.kind);
    j["payload"] = e.payload;
    j["qubits"] = e.qubits;
    j["decoding_bits"] = e.decoding_bits;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string ProtocolTranscript::to_csv() const {
  std::string out = "seq,stage,actor,event,qubits,decoding_bits,payload\n";
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& e = events_[i];
    out += std::to_string(i) + ',' + std::string(to_string(e.stage)) + ',' + std::string(to_string(e.actor)) +
           ',' + std::string(to_string(e.kind)) + ',' + std::to_string(e.qubits) + ',' +
           std::to_string(e.decoding_bits) + ",\"";
    for (char c : e.payload) {
      if (c == '"') out += '"';
      out += c;
    }
    out += "\"\n";
  }
  return out;
}

ProtocolTranscript ProtocolTranscript::from_jsonl(std::string_view text) {
  ProtocolTranscript t;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    t.append({stage_from_string(j.at("stage").get<std::string>()),
              parse_enum<Party>(kPartyNames, j.at("actor").get<std::string>(), "party"),
              parse_enum<EventKind>(kEventNames, j.at("event").get<std::string>(), "event"),
              j.at("payload").get<std::string>(), j.at("qubits").get<std::size_t>(),
              j.at("decoding_bits").get<std::size_t>()});
  }
  return t;
}

void ChannelNoise::apply(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs) const {
  const auto& noise = arm == Arm::Alice ? alice : bob;
  if (!noise) return;
  const auto set = kraus_set<double>(noise->kind, noise->p);
  for (const QubitRef& q : sequence) pairs.at(q.pair) = apply_local_channel(pairs[q.pair], set, q.slot);
}

std::string join_positions(std::span<const std::size_t> positions) {
  std::string out;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(positions[i]);
  }
  return out;
}

std::string join_bell_states(std::span<const BellState> states) {
  std::string out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out += ' ';
    out += to_string(states[i]);
  }
  return out;
}

BellState bell_state_from_string(std::string_view name) {
  for (BellState s : kAllBellStates) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown Bell state '" + std::string(name) + "'");
}

}  // namespace qpc
