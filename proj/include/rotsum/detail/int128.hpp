#ifndef ROTSUM_DETAIL_INT128_HPP
#define ROTSUM_DETAIL_INT128_HPP

#include <cstdint>

#include "rotsum/rational.hpp"

namespace rotsum::detail {

using u128 = unsigned __int128;

inline bool fits_u128(const BigInt& v) {
    return v >= 0 && (v >> 128) == 0;
}

inline u128 to_u128(const BigInt& v) {
    u128 hi = static_cast<std::uint64_t>(v >> 64);
    u128 lo = static_cast<std::uint64_t>(v & BigInt(~std::uint64_t(0)));
    return (hi << 64) | lo;
}

inline BigInt from_u128(u128 v) {
    BigInt r = static_cast<std::uint64_t>(v >> 64);
    r <<= 64;
    r |= BigInt(static_cast<std::uint64_t>(v));
    return r;
}

inline double u128_to_double(u128 v) {
    return static_cast<double>(static_cast<std::uint64_t>(v >> 64)) * 18446744073709551616.0 +
           static_cast<double>(static_cast<std::uint64_t>(v));
}

} // namespace rotsum::detail

#endif
