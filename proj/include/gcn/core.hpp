#pragma once

// Primality tests for Generalized Cullen Numbers C_b(n) = n b^n + 1.
//
// test1        n^(b^n) == (-1)^b (mod N), necessary for primality.
// test2_base   For a prime p | b, the levels a_i = (-n)^(b^n / p^i) (mod N)
//              are 1 up to some K; either K = n r_p, or Phi_p(a_{K+1}) == 0.
// certify_base If Phi_p(a_{K+1}) == 0 and p^(2(n r_p - K)) > N - 1, N is prime.
//
// All residues are canonical: -n is N - n, and (-1)^b is 1 or N - 1.

#include "gcn/bigarith.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

namespace gcn {

/// Raised when an internal consistency check fails, e.g. compute_K called on
/// a candidate that does not pass test1.
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised for malformed untrusted input such as a certificate whose fields do
/// not describe a well-formed claim.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// N = n b^n + 1 together with the exponent b^n and the factored base.
/// Immutable after construction and safe to share between threads.
class GcnCandidate {
public:
    GcnCandidate(Natural b, Natural n);

    const Natural& b() const noexcept { return b_; }
    const Natural& n() const noexcept { return n_; }
    const FactoredBase& base_factors() const noexcept { return factors_; }
    const Natural& value() const noexcept { return value_; }
    /// b^n, obtained as (N - 1) / n.
    const Natural& exponent() const noexcept { return exponent_; }
    /// N - n, the canonical residue of -n.
    Natural minus_n() const { return value_ - n_; }

private:
    Natural b_;
    Natural n_;
    FactoredBase factors_;
    Natural value_;
    Natural exponent_;
};

/// n b^n + 1.
Natural gcn_value(const Natural& b, const Natural& n);

struct PrimalityCertificate {
    static constexpr int kSchemaVersion = 1;

    Natural b;
    Natural n;
    Natural p;
    Natural K;
    int schema_version = kSchemaVersion;

    friend bool operator==(const PrimalityCertificate&, const PrimalityCertificate&) = default;
};

enum class CompositeKind { ParityPrefilter, Test1Failure, Test2Failure, SieveDivisor };

struct Composite {
    CompositeKind kind = CompositeKind::Test1Failure;
    /// Failing TEST2 base or sieving prime; empty for the other kinds.
    std::optional<Natural> prime;

    friend bool operator==(const Composite&, const Composite&) = default;
};
struct ProbablePrimeTest1 {
    friend bool operator==(const ProbablePrimeTest1&, const ProbablePrimeTest1&) = default;
};
struct ProbablePrimeTest2 {
    std::set<Natural> bases;
    friend bool operator==(const ProbablePrimeTest2&, const ProbablePrimeTest2&) = default;
};
struct ProvenPrime {
    PrimalityCertificate certificate;
    friend bool operator==(const ProvenPrime&, const ProvenPrime&) = default;
};

/// Ordered by strength: Composite < ProbablePrimeTest1 < ProbablePrimeTest2 < ProvenPrime.
using Verdict = std::variant<Composite, ProbablePrimeTest1, ProbablePrimeTest2, ProvenPrime>;

/// Position of the verdict in the lattice, 0 for Composite up to 3.
int verdict_rank(const Verdict& v) noexcept;

/// Stable tag: "Composite", "ProbablePrimeTest1", "ProbablePrimeTest2", "ProvenPrime".
std::string verdict_tag(const Verdict& v);
std::string composite_kind_name(CompositeKind kind);

/// Composite(ParityPrefilter) when b and n are both odd, so N is even and > 2.
std::optional<Composite> parity_prefilter(const GcnCandidate& c);

/// One modular exponentiation: n^(b^n) against (-1)^b.
Verdict test1(const GcnCandidate& c);

/// Largest i in [0, n r_p] with (-n)^(b^n / p^i) == 1 (mod N), by binary
/// search over the monotone prefix. Requires test1 to have passed.
Natural compute_K(const GcnCandidate& c, const Natural& p);

enum class Test2Outcome {
    AllLevelsOne,     // K = n r_p
    CyclotomicRoot,   // K < n r_p and Phi_p(a_{K+1}) == 0
    Failed,
};

struct Test2Result {
    Test2Outcome outcome = Test2Outcome::Failed;
    Natural K;

    bool passed() const noexcept { return outcome != Test2Outcome::Failed; }
};

Test2Result test2_base(const GcnCandidate& c, const Natural& p);

/// Certificate iff p^(2(n r_p - K)) > N - 1. K must be below n r_p.
std::optional<PrimalityCertificate> certify_base(const GcnCandidate& c, const Natural& p, const Natural& K);

struct Evaluation {
    Verdict verdict;
    /// K for every base that was examined, including a failing one.
    std::map<Natural, Natural> k_by_base;
};

/// Prefilter, TEST1, TEST2 at every prime p | b in increasing order, then
/// certification from the smallest base that admits one.
Evaluation evaluate(const GcnCandidate& c);
Verdict run_full_test(const GcnCandidate& c);

/// Rechecks both certificate hypotheses from scratch. Returns false when the
/// arithmetic claims fail; throws ValidationError when the fields themselves
/// are malformed (b < 2, n < 1, p not a prime factor of b, K >= n r_p).
bool verify_certificate(const PrimalityCertificate& cert);

}  // namespace gcn
