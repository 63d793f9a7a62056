#include "qpc/efficiency.hpp"

#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace qpc {

Rational Rational::make(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  return g ? Rational{num / g, den / g} : Rational{0, 1};
}

std::string Rational::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<unsigned __int128>(a.num) * b.den < static_cast<unsigned __int128>(b.num) * a.den;
}

void ResourceLedger::add(LedgerItem item) {
  q += item.qubits;
  b += item.bits;
  items.push_back(std::move(item));
}

std::uint64_t ResourceLedger::simulated_qubits() const {
  std::uint64_t s = 0;
  for (const auto& i : items)
    if (i.simulated) s += i.qubits;
  return s;
}

std::uint64_t ResourceLedger::simulated_bits() const {
  std::uint64_t s = 0;
  for (const auto& i : items)
    if (i.simulated) s += i.bits;
  return s;
}

Efficiency efficiency_osb(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("efficiency: N must be at least 1");
  ResourceLedger l;
  l.n = n;
  l.c = 2 * n;
  l.add({"Bell pairs (2N)", 4 * n, 0, true});
  l.add({"decoy pairs (N per sequence)", 4 * n, 0, true});
  l.add({"C_A and C_B", 0, 2 * n, true});
  l.add({"verdict", 0, 1, true});
  l.add({"K_AB establishment", 4 * n, 3 * n, false});
  return {l, l.eta()};
}

Efficiency efficiency_sqpc(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("efficiency: N must be at least 1");
  ResourceLedger l;
  l.n = n;
  l.c = 2 * n;
  l.add({"Bell pairs (8N)", 16 * n, 0, true});
  l.add({"measure-resend qubits (4N per user)", 8 * n, 0, true});
  l.add({"TP announcements", 0, 8 * n, true});
  l.add({"measured coordinates (4N per user)", 0, 8 * n, true});
  l.add({"C_A and C_B", 0, 2 * n, true});
  l.add({"verdict", 0, 1, true});
  l.add({"K_AB establishment (SQKD)", 24 * n, 16 * n, false});
  l.add({"K_AT establishment (SQKA)", 5 * n, 5 * n, false});
  l.add({"K_BT establishment (SQKA)", 5 * n, 5 * n, false});
  return {l, l.eta()};
}

Efficiency efficiency(Protocol p, std::uint64_t n) {
  return p == Protocol::Osb ? efficiency_osb(n) : efficiency_sqpc(n);
}

std::string efficiency_table(const std::vector<std::uint64_t>& ns) {
  std::string out = "protocol,n,c,q,b,eta,eta_decimal\n";
  for (Protocol p : {Protocol::Osb, Protocol::Sqpc}) {
    for (std::uint64_t n : ns) {
      const Efficiency e = efficiency(p, n);
      char dec[64];
      std::snprintf(dec, sizeof(dec), "%.9f", e.eta.to_double());
      out += std::string(to_string(p)) + ',' + std::to_string(n) + ',' + std::to_string(e.ledger.c) + ',' +
             std::to_string(e.ledger.q) + ',' + std::to_string(e.ledger.b) + ',' + e.eta.to_string() + ',' + dec +
             '\n';
    }
  }
  return out;
}

}  // namespace qpc
