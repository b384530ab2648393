#pragma once

// Reference probable-prime tests and the ground-truth oracle used to label
// pseudoprimes.

#include "gcn/bigarith.hpp"

#include <cstdint>
#include <variant>

namespace gcn {

/// a^(N-1) == 1 (mod N). N odd >= 3; a is reduced mod N first and must be
/// coprime to N.
bool fermat_probable_prime(const Natural& N, const Natural& a);

/// Miller-Rabin condition for a single base, with N - 1 = 2^t m, m odd.
bool strong_probable_prime(const Natural& N, const Natural& a);

struct OraclePrime {
    friend bool operator==(const OraclePrime&, const OraclePrime&) = default;
};
struct OracleComposite {
    friend bool operator==(const OracleComposite&, const OracleComposite&) = default;
};
struct OracleProbablePrime {
    int rounds = 0;
    friend bool operator==(const OracleProbablePrime&, const OracleProbablePrime&) = default;
};
using OracleVerdict = std::variant<OraclePrime, OracleComposite, OracleProbablePrime>;

struct OracleOptions {
    int random_rounds = 32;
    std::uint64_t seed = 0x6763'6e2d'6f72'6163ULL;
};

/// Upper end of the range where strong-probable-prime tests to the first 13
/// prime bases are a proof (Sorenson and Webster, 2015): 3317044064679887385961981.
const Natural& deterministic_oracle_bound();

/// Prime/Composite below deterministic_oracle_bound(); above it, Composite or
/// ProbablePrime after trial division and options.random_rounds seeded
/// Miller-Rabin rounds.
OracleVerdict trusted_is_prime(const Natural& N, const OracleOptions& options = {});

/// True for Prime and ProbablePrime.
bool oracle_says_prime(const OracleVerdict& v);

/// Smallest prime factor of N if it is <= limit, else 0. N >= 2.
std::uint64_t small_factor(const Natural& N, std::uint64_t limit);

}  // namespace gcn
