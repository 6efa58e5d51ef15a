#pragma once

#include <cstdint>

namespace torsion::mod64 {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// All routines require modulus < 2^63 and operands already reduced.
inline u64 mul(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 add(u64 a, u64 b, u64 m) {
  const u64 s = a + b;
  return s >= m ? s - m : s;
}

inline u64 pow(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul(result, base, m);
    base = mul(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline constexpr u64 kMaxModulus = (u64{1} << 62);

}  // namespace torsion::mod64
