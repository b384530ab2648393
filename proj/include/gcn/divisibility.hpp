#pragma once

// Divisibility structure of C_b(n): composite families, periodic divisor
// propagation, common-divisor bounds and a small-prime sieve over n.

#include "gcn/bigarith.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gcn {

/// n_b(k, p) = (b^k - k)(p - 1) - k. When p does not divide b, p | C_b(n_b(k, p)).
/// Throws std::domain_error if p | b or p is not prime, std::range_error if
/// the index is < 1.
Natural prop1_index(const Natural& b, const Natural& k, const Natural& p);

/// The next `count` indices n + m p h_p (m = 1..count), h_p the order of b mod
/// p. Every returned index n' has p | C_b(n'). Requires p | C_b(n).
std::vector<Natural> prop2_extend(const Natural& b, const Natural& n, const Natural& p, std::size_t count);

/// A_{m,n} = |n^alpha + (-1)^(alpha+beta-1) m^beta| with alpha = m/g,
/// beta = n/g, g = gcd(n, m). gcd(C_b(n), C_b(m)) divides it for every b.
Natural prop3_bound(const Natural& n, const Natural& m);

/// Residues r in [0, period) with n == r (mod period) => p | C_b(n).
struct SievePattern {
    std::uint64_t p = 0;
    std::uint64_t period = 0;  // p * ord_p(b)
    std::vector<std::uint64_t> residues;  // ascending

    bool matches(std::uint64_t n) const;
    /// "p period r1,r2,..." (empty residue list prints as "-").
    std::string to_row() const;

    friend bool operator==(const SievePattern&, const SievePattern&) = default;
};

/// Built per residue class of n mod ord_p(b): within each class the condition
/// n b^n + 1 == 0 (mod p) fixes n mod p, and CRT combines the two moduli.
SievePattern sieve_pattern(const Natural& b, std::uint64_t p);

/// Patterns for every prime p <= prime_limit not dividing b.
std::vector<SievePattern> sieve_patterns(const Natural& b, std::uint64_t prime_limit);

/// For each n in [n_from, n_to], the smallest sieving prime that properly
/// divides C_b(n) (i.e. C_b(n) != p), or nullopt when n survives.
std::vector<std::optional<std::uint64_t>> sieve_hits(const Natural& b, std::uint64_t n_from, std::uint64_t n_to,
                                                     const std::vector<SievePattern>& patterns);

/// Indices n in [n_from, n_to] with no sieving prime <= prime_limit properly
/// dividing C_b(n). Empty when n_from > n_to.
std::vector<std::uint64_t> sieve_filter(const Natural& b, std::uint64_t n_from, std::uint64_t n_to,
                                        std::uint64_t prime_limit);

}  // namespace gcn
