#pragma once

// Arbitrary-precision kernels shared by the tests, sieves and harnesses.
// All magnitudes are GMP integers; every function here is pure.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gcn {

/// Non-negative arbitrary-precision integer. Negative values are rejected at
/// every public entry point that documents a Natural argument.
using Natural = mpz_class;

/// Parses a plain decimal string (digits only, no sign, no whitespace).
/// Throws std::invalid_argument on anything else.
Natural parse_natural(std::string_view text);

/// Canonical decimal serialization.
std::string to_decimal(const Natural& x);

/// Narrowing conversion used where an index must drive a loop or mpz_pow_ui.
/// Throws std::domain_error when x does not fit.
unsigned long to_ulong(const Natural& x, const char* what);

struct PrimePower {
    Natural prime;
    unsigned long exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of an integer >= 2, primes strictly increasing.
class FactoredBase {
public:
    FactoredBase() = default;
    /// Validates the invariants (sorted distinct primes, exponents >= 1).
    explicit FactoredBase(std::vector<PrimePower> factors);

    const std::vector<PrimePower>& factors() const noexcept { return factors_; }
    Natural value() const;
    /// Exponent of p in the factored value; 0 when p is not a factor.
    unsigned long exponent_of(const Natural& p) const;
    bool empty() const noexcept { return factors_.empty(); }

    friend bool operator==(const FactoredBase&, const FactoredBase&) = default;

private:
    std::vector<PrimePower> factors_;
};

/// base^exponent mod modulus, result in [0, modulus).
Natural modpow(const Natural& base, const Natural& exponent, const Natural& modulus);

/// Complete factorization: trial division up to 10^6, then Brent-Pollard rho
/// with a fixed seed sequence so the output is reproducible.
FactoredBase factorize(const Natural& x);

/// Smallest h >= 1 with a^h == 1 (mod p), found by stripping prime factors
/// from p - 1.
Natural multiplicative_order(const Natural& a, const Natural& p);

/// Phi_p(x) mod modulus for prime p, where Phi_p(x) = 1 + x + ... + x^(p-1).
/// Uses the doubling identity S(2k) = S(k) (1 + x^k), so no inverse of x - 1
/// is ever required.
Natural cyclotomic_eval(const Natural& p, const Natural& x, const Natural& modulus);

/// Exact test of p^(2e) > bound. Strict: equality is false.
bool power_exceeds(const Natural& p, const Natural& e, const Natural& bound);

/// Number of decimal digits of x >= 1.
Natural digit_count(const Natural& x);

/// Primality as used for inputs that are small by construction (prime
/// factors of bases, sieving primes). Backed by GMP's BPSW+MR, which is
/// exact below 2^64.
bool is_probable_prime(const Natural& x);

/// Primes <= limit by the sieve of Eratosthenes.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

}  // namespace gcn
