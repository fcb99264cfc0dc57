#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace satmin {

// Minimal arbitrary-precision unsigned integer: base-2^32 limbs, little
// endian. Supports exactly what the factorization harness needs (decimal
// I/O, bit access, multiply, compare); nothing more.
class BigUint {
public:
  BigUint() = default;

  BigUint(std::uint64_t v) {
    if (v) limbs_.push_back(static_cast<std::uint32_t>(v));
    if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
  }

  static BigUint from_decimal(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("BigUint: empty decimal string");
    BigUint r;
    for (char ch : text) {
      if (ch < '0' || ch > '9')
        throw std::invalid_argument("BigUint: invalid decimal digit");
      r.mul_small(10);
      r.add_small(static_cast<std::uint32_t>(ch - '0'));
    }
    return r;
  }

  static BigUint from_bits(const std::vector<bool>& bits) {
    BigUint r;
    r.limbs_.assign((bits.size() + 31) / 32, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) r.limbs_[i / 32] |= std::uint32_t{1} << (i % 32);
    r.trim();
    return r;
  }

  std::string to_decimal() const {
    if (is_zero()) return "0";
    BigUint t = *this;
    std::string digits;
    while (!t.is_zero()) digits.push_back(static_cast<char>('0' + t.divmod_small(10)));
    std::reverse(digits.begin(), digits.end());
    return digits;
  }

  bool is_zero() const { return limbs_.empty(); }
  bool is_odd() const { return !limbs_.empty() && (limbs_[0] & 1); }

  int bit_length() const {
    if (limbs_.empty()) return 0;
    int bits = static_cast<int>(limbs_.size() - 1) * 32;
    std::uint32_t top = limbs_.back();
    while (top) {
      ++bits;
      top >>= 1;
    }
    return bits;
  }

  bool bit(int i) const {
    const std::size_t limb = static_cast<std::size_t>(i) / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (static_cast<std::size_t>(i) % 32)) & 1;
  }

  std::uint64_t to_u64() const {
    if (bit_length() > 64) throw std::overflow_error("BigUint: does not fit in 64 bits");
    std::uint64_t v = 0;
    if (!limbs_.empty()) v = limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    return v;
  }

  friend BigUint operator*(const BigUint& a, const BigUint& b) {
    BigUint r;
    if (a.is_zero() || b.is_zero()) return r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
        std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                            r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      r.limbs_[i + b.limbs_.size()] += static_cast<std::uint32_t>(carry);
    }
    r.trim();
    return r;
  }

  friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }

  friend bool operator<(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size();
    for (std::size_t i = a.limbs_.size(); i-- > 0;)
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i];
    return false;
  }
  friend bool operator<=(const BigUint& a, const BigUint& b) { return a < b || a == b; }

private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  void mul_small(std::uint32_t m) {
    std::uint64_t carry = 0;
    for (std::uint32_t& limb : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  void add_small(std::uint32_t a) {
    std::uint64_t carry = a;
    for (std::uint32_t& limb : limbs_) {
      if (!carry) return;
      std::uint64_t cur = limb + carry;
      limb = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  std::uint32_t divmod_small(std::uint32_t d) {
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      std::uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur / d);
      rem = cur % d;
    }
    trim();
    return static_cast<std::uint32_t>(rem);
  }

  std::vector<std::uint32_t> limbs_;
};

}  // namespace satmin
