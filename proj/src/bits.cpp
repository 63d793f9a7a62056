#include "qpc/bits.hpp"

#include <algorithm>

namespace qpc {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw std::invalid_argument("BitString: entries must be 0 or 1");
  }
}

BitString BitString::from_binary(std::string_view text) {
  BitString out;
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("binary string may contain only 0 and 1");
    out.push_back(c - '0');
  }
  return out;
}

BitString BitString::from_hex(std::string_view text, std::size_t length) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.empty()) throw std::invalid_argument("empty hex string");
  std::vector<std::uint8_t> raw;
  raw.reserve(text.size() * 4);
  for (char c : text) {
    int v;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      throw std::invalid_argument("invalid hex digit '" + std::string(1, c) + "'");
    }
    for (int k = 3; k >= 0; --k) raw.push_back(static_cast<std::uint8_t>((v >> k) & 1));
  }
  const auto first_one = std::find(raw.begin(), raw.end(), 1);
  const auto significant = static_cast<std::size_t>(raw.end() - first_one);
  if (significant > length) {
    throw std::invalid_argument("hex value 0x" + std::string(text) + " does not fit in " +
                                std::to_string(length) + " bits");
  }
  std::vector<std::uint8_t> bits(length - significant, 0);
  bits.insert(bits.end(), first_one, raw.end());
  return BitString(std::move(bits));
}

BitString BitString::from_integer(std::uint64_t value, std::size_t length) {
  BitString out(length);
  for (std::size_t i = 0; i < length && i < 64; ++i) {
    out.bits_[length - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1);
  }
  return out;
}

BitString BitString::random(std::size_t length, Rng& rng) {
  BitString out(length);
  for (auto& b : out.bits_) b = static_cast<std::uint8_t>(rng.bit());
  return out;
}

bool BitString::all_zero() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
}

std::size_t BitString::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> BitString::ones() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

BitString BitString::complement() const {
  BitString out(*this);
  for (auto& b : out.bits_) b ^= 1;
  return out;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.size() != size()) {
    throw ProtocolError("XOR of bit strings with lengths " + std::to_string(size()) + " and " +
                        std::to_string(other.size()));
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
  return *this;
}

BitString BitString::operator^(const BitString& other) const {
  BitString out(*this);
  out ^= other;
  return out;
}

std::string BitString::to_binary() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(static_cast<char>('0' + b));
  return out;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  const std::size_t pad = (4 - bits_.size() % 4) % 4;
  int acc = 0;
  std::size_t count = pad;
  for (auto b : bits_) {
    acc = (acc << 1) | b;
    if (++count == 4) {
      out.push_back(kDigits[acc]);
      acc = 0;
      count = 0;
    }
  }
  return out.empty() ? "0" : out;
}

BitString ideal_key(std::size_t length, Rng& rng) {
  if (length == 0) throw std::invalid_argument("ideal_key: length must be at least 1");
  return BitString::random(length, rng);
}

}  // namespace qpc
