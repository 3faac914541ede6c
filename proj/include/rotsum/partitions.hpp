#ifndef ROTSUM_PARTITIONS_HPP
#define ROTSUM_PARTITIONS_HPP

#include <memory>
#include <string>
#include <vector>

#include "rotsum/cf.hpp"

namespace rotsum {

// One interval of the level-n partition: left endpoint {j alpha} (type l,
// length lambda^(n)) or the corresponding s-interval of length lambda^(n+1).
struct Interval {
    BigRat left;
    char type; // 'l' or 's'
    BigInt j;  // floor index within its tower
};

// The partition xi^(n) of [0,1) for even n: q_{n+1} intervals of type l and
// q_n of type s, sorted left to right, tiling [0,1) exactly.
struct PartitionLevel {
    int n = 0;
    BigRat lambda_n, lambda_n1;
    BigInt q_n, q_n1;
    std::vector<Interval> intervals;
};

struct CodingString {
    std::string letters; // over {'l','s'}
};

// Middle points of the l- and s-intervals (ascending), and the sorted images
// under x -> 1-x.
struct MiddlePoints {
    std::vector<BigRat> z_l, zp_l;
    std::vector<BigRat> z_s, zp_s;
};

// Result of the streaming symmetry check of a coding string against its
// geometric reflection: positions 2 .. L-1 must match, positions 1 and L
// must differ (first/last letters are l/s and s/l).
struct SymmetryCheck {
    bool interior_match = false;
    bool ends_differ = false;
    bool complete = false; // true if every interior pair was compared
    double length = 0;     // q_n + q_{n+1} (approximate if huge)
    std::uint64_t positions_checked = 0;
};

// Builds xi^(n) with exact endpoints; cached per (alpha, n). Throws
// LevelTooLarge beyond `cap` intervals (large levels are reachable only
// through the streaming/iterator interfaces).
std::shared_ptr<const PartitionLevel>
build_level(const CFExpansion& cf, int n, std::uint64_t cap = 10'000'000);

// Left-to-right letter sequence of interval types.
CodingString coding_string(const PartitionLevel& level);

// Coding of the reflected tiling (x -> 1-x), computed geometrically from the
// reflected endpoints.
CodingString reflected_string(const PartitionLevel& level);

MiddlePoints middle_points(const PartitionLevel& level);

// Streams the coding string and its reflection from both ends without
// materializing the level; compares up to `window` interior position pairs
// (all of them if the level has at most full_cap intervals).
SymmetryCheck almost_symmetry_check(const CFExpansion& cf, int n,
                                    std::uint64_t full_cap = 1'000'000,
                                    std::uint64_t window = 100'000);

} // namespace rotsum

#endif
