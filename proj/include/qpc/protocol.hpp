#ifndef QPC_PROTOCOL_HPP
#define QPC_PROTOCOL_HPP

// Types shared by both comparison protocols: parties, stages, outcomes, the
// public transcript, and the hook points an attacker can occupy.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qpc/bits.hpp"
#include "qpc/noise.hpp"
#include "qpc/quantum.hpp"
#include "qpc/rng.hpp"

namespace qpc {

enum class Protocol { Osb, Sqpc };

std::string_view to_string(Protocol p);
Protocol protocol_from_string(std::string_view tag);

enum class Party { ThirdParty, Alice, Bob, Eve, KeyOracle };

std::string_view to_string(Party p);

/// The quantum channel between TP and one user.
enum class Arm { Alice, Bob };

enum class Stage {
  Osb1, Osb2, Osb3, Osb4, Osb5, Osb6, Osb7, Osb8,
  Sq1, Sq2, Sq3, Sq4, Sq5, Sq6, Sq7, Sq8, Sq9,
};

std::string_view to_string(Stage s);
Stage stage_from_string(std::string_view tag);

enum class AbortReason { ErrorRateExceeded, ParityViolation, ProtocolError, YieldShortfall };

std::string_view to_string(AbortReason r);

struct Equal {
  friend bool operator==(const Equal&, const Equal&) = default;
};

struct Unequal {
  std::vector<std::size_t> positions;
  friend bool operator==(const Unequal&, const Unequal&) = default;
};

struct Aborted {
  Stage stage;
  AbortReason reason;
  double error_rate = 0.0;
  std::string detail;
  friend bool operator==(const Aborted&, const Aborted&) = default;
};

/// TP's verdict.
class ComparisonOutcome {
 public:
  using Value = std::variant<Equal, Unequal, Aborted>;

  ComparisonOutcome(Equal e) : value_(e) {}
  ComparisonOutcome(Unequal u);
  ComparisonOutcome(Aborted a) : value_(std::move(a)) {}

  /// Equal iff every bit of R is zero, otherwise Unequal at the one positions.
  static ComparisonOutcome from_result(const BitString& r);

  bool is_equal() const { return std::holds_alternative<Equal>(value_); }
  bool is_unequal() const { return std::holds_alternative<Unequal>(value_); }
  bool is_aborted() const { return std::holds_alternative<Aborted>(value_); }

  const Unequal& unequal() const { return std::get<Unequal>(value_); }
  const Aborted& aborted() const { return std::get<Aborted>(value_); }
  const Value& value() const { return value_; }

  std::string summary() const;

  friend bool operator==(const ComparisonOutcome&, const ComparisonOutcome&) = default;

 private:
  Value value_;
};

enum class EventKind { Prepare, QuantumSend, Measurement, Announce, KeyEstablished, Check, Verdict, Abort, Restart };

std::string_view to_string(EventKind k);

/// One transcript line. `qubits` counts qubits freshly prepared by the actor
/// in this event; `decoding_bits` counts classical bits that the comparison
/// needs for decoding (eavesdropping and correlation checks are excluded).
struct TranscriptEvent {
  Stage stage;
  Party actor;
  EventKind kind;
  std::string payload;
  std::size_t qubits = 0;
  std::size_t decoding_bits = 0;

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

/// Append-only public record of a run. Private data (measurement results,
/// keys) never appears in a payload; announcements are visible to everyone.
class ProtocolTranscript {
 public:
  void append(TranscriptEvent e) { events_.push_back(std::move(e)); }
  void record(Stage stage, Party actor, EventKind kind, std::string payload, std::size_t qubits = 0,
              std::size_t decoding_bits = 0);

  const std::vector<TranscriptEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  std::size_t qubits_prepared() const;
  std::size_t decoding_bits() const;

  /// The payload of the first announcement matching stage and actor.
  std::optional<std::string> announcement(Stage stage, Party actor) const;

  /// One JSON object per line, fields in fixed order.
  std::string to_jsonl() const;
  std::string to_csv() const;
  static ProtocolTranscript from_jsonl(std::string_view text);

 private:
  std::vector<TranscriptEvent> events_;
};

/// A qubit in transit: which pair it belongs to and which half it is.
struct QubitRef {
  std::size_t pair;
  Slot slot;
};

using PairStates = std::vector<DensityMatrix>;

enum class ClassicalAction { Measure, Reflect };

/// Per-arm channel noise. A missing entry is a noiseless channel.
struct ChannelNoise {
  std::optional<ArmNoise> alice;
  std::optional<ArmNoise> bob;

  /// Applies the arm's Kraus set to every qubit in the sequence.
  void apply(Arm arm, std::span<const QubitRef> sequence, PairStates& pairs) const;
};

/// Attacker hook points. The default implementation is a passive channel.
class Adversary {
 public:
  virtual ~Adversary() = default;

  /// Called at the start of each protocol attempt.
  virtual void reset() {}

  /// Qubits travelling from TP to the user on `arm`, in transmission order.
  virtual void forward(Arm /*arm*/, std::span<const QubitRef> /*sequence*/, PairStates& /*pairs*/,
                       RunContext& /*ctx*/) {}

  /// Qubits travelling back from the user to TP (semi-quantum protocol only).
  virtual void returned(Arm /*arm*/, std::span<const QubitRef> /*sequence*/, PairStates& /*pairs*/,
                        RunContext& /*ctx*/) {}

  /// A dishonest Alice may substitute her own measure/reflect plan.
  virtual std::optional<std::vector<ClassicalAction>> alice_plan(std::size_t /*count*/, RunContext& /*ctx*/) {
    return std::nullopt;
  }
};

std::string join_positions(std::span<const std::size_t> positions);
std::string join_bell_states(std::span<const BellState> states);

}  // namespace qpc

#endif  // QPC_PROTOCOL_HPP
