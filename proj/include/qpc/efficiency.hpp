#ifndef QPC_EFFICIENCY_HPP
#define QPC_EFFICIENCY_HPP

// Qubit efficiency eta = c / (q + b): compared bits over qubits consumed plus
// classical bits needed for decoding.

#include <cstdint>
#include <string>
#include <vector>

#include "qpc/protocol.hpp"

namespace qpc {

/// Non-negative fraction kept in lowest terms.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(std::uint64_t num, std::uint64_t den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);
};

struct LedgerItem {
  std::string name;
  std::uint64_t qubits = 0;
  std::uint64_t bits = 0;
  bool simulated = false;  // produced by the simulated protocol phase
};

struct ResourceLedger {
  std::uint64_t n = 0;
  std::uint64_t c = 0;
  std::uint64_t q = 0;
  std::uint64_t b = 0;
  std::vector<LedgerItem> items;

  void add(LedgerItem item);
  std::uint64_t simulated_qubits() const;
  std::uint64_t simulated_bits() const;
  Rational eta() const { return Rational::make(c, q + b); }
};

struct Efficiency {
  ResourceLedger ledger;
  Rational eta;
};

/// c = 2N, q = 12N, b = 5N + 1.
Efficiency efficiency_osb(std::uint64_t n);

/// c = 2N, q = 58N, b = 44N + 1, so q + b = 102N + 1.
Efficiency efficiency_sqpc(std::uint64_t n);

Efficiency efficiency(Protocol p, std::uint64_t n);

/// Table with one row per (protocol, N): ledger totals, exact eta and its
/// decimal value.
std::string efficiency_table(const std::vector<std::uint64_t>& ns);

}  // namespace qpc

#endif  // QPC_EFFICIENCY_HPP
