#ifndef QPC_BITS_HPP
#define QPC_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qpc/rng.hpp"

namespace qpc {

/// Raised when a protocol step is called with inconsistent inputs
/// (mismatched lengths, missing keys). Distinct from an Aborted outcome,
/// which is a legitimate protocol result.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered bit sequence. Index 0 is the first transmitted / leftmost bit.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length) : bits_(length, 0) {}
  explicit BitString(std::vector<std::uint8_t> bits);

  /// From a string of '0'/'1' characters.
  static BitString from_binary(std::string_view text);

  /// From hex (optional 0x prefix), most significant bit first, left-padded
  /// with zeros to `length` bits. Values that do not fit are rejected.
  static BitString from_hex(std::string_view text, std::size_t length);

  /// The low `length` bits of `value`, most significant first.
  static BitString from_integer(std::uint64_t value, std::size_t length);

  static BitString random(std::size_t length, Rng& rng);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  int operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, int value) { bits_.at(i) = static_cast<std::uint8_t>(value & 1); }
  void flip(std::size_t i) { bits_.at(i) ^= 1; }
  void push_back(int value) { bits_.push_back(static_cast<std::uint8_t>(value & 1)); }

  bool all_zero() const;
  std::size_t popcount() const;
  std::vector<std::size_t> ones() const;

  BitString complement() const;
  BitString operator^(const BitString& other) const;
  BitString& operator^=(const BitString& other);
  friend bool operator==(const BitString&, const BitString&) = default;

  std::string to_binary() const;
  std::string to_hex() const;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Stand-in for an externally established shared key: uniform bits drawn from
/// the key-oracle stream and handed only to the named holders.
BitString ideal_key(std::size_t length, Rng& rng);

}  // namespace qpc

#endif  // QPC_BITS_HPP
