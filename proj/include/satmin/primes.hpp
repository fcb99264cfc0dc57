#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

namespace satmin {

// Trial-division primality; fine for the 64-bit ranges the harness touches.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ULL, 3ULL, 5ULL}) {
    if (n == d) return true;
    if (n % d == 0) return false;
  }
  for (std::uint64_t d = 7; d * d <= n; d += 6) {
    if (n % d == 0) return false;
    if (n % (d + 4) == 0) return false;
  }
  return true;
}

inline std::uint64_t prev_prime_u64(std::uint64_t n) {
  while (n >= 2 && !is_prime_u64(n)) --n;
  return n;
}

// Smallest factor > 1, or n itself when n is prime.
inline std::uint64_t smallest_factor_u64(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return d;
  return n;
}

// (p, q) with p <= q and p * q = n when n is a semiprime; nullopt otherwise.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> factor_semiprime_u64(std::uint64_t n) {
  if (n < 4) return std::nullopt;
  const std::uint64_t p = smallest_factor_u64(n);
  if (p == n) return std::nullopt;  // prime
  const std::uint64_t q = n / p;
  if (!is_prime_u64(q)) return std::nullopt;
  return std::make_pair(p, q);
}

// Deterministic semiprime with exactly `bits` significant bits: p is the
// widest prime of bits/2 bits, q the largest prime keeping p*q in range.
// The factors fit in 64 bits each; the product may need 128.
inline std::pair<std::uint64_t, std::uint64_t> make_semiprime_u64(int bits) {
  if (bits < 6 || bits > 64)
    throw std::invalid_argument("make_semiprime_u64: bits must be in 6..64");
  using u128 = unsigned __int128;
  const std::uint64_t p = prev_prime_u64((1ULL << (bits / 2)) - 1);
  const u128 top = (u128{1} << bits) - 1;
  const u128 bottom = u128{1} << (bits - 1);
  const std::uint64_t lo = static_cast<std::uint64_t>((bottom + p - 1) / p);
  std::uint64_t q = static_cast<std::uint64_t>(top / p);
  while (q >= lo && (q == p || !is_prime_u64(q))) --q;
  if (q < lo) throw std::logic_error("make_semiprime_u64: no prime cofactor in range");
  return {p, q};
}

}  // namespace satmin
