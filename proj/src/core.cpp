#include "gcn/core.hpp"

#include "gcn/baselines.hpp"

namespace gcn {

namespace {

Natural power_of(const Natural& p, const Natural& i)
{
    Natural r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), to_ulong(i, "level index"));
    return r;
}

Natural exact_quotient(const Natural& numerator, const Natural& divisor)
{
    Natural q;
    mpz_divexact(q.get_mpz_t(), numerator.get_mpz_t(), divisor.get_mpz_t());
    return q;
}

// a_i = (-n)^(b^n / p^i) mod N.
Natural level(const GcnCandidate& c, const Natural& p, const Natural& i)
{
    return modpow(c.minus_n(), exact_quotient(c.exponent(), power_of(p, i)), c.value());
}

unsigned long exponent_in_base(const GcnCandidate& c, const Natural& p)
{
    const unsigned long r = c.base_factors().exponent_of(p);
    if (r == 0) throw std::domain_error("p = " + to_decimal(p) + " is not a prime divisor of b = " + to_decimal(c.b()));
    return r;
}

}  // namespace

GcnCandidate::GcnCandidate(Natural b, Natural n)
    : b_(std::move(b)), n_(std::move(n))
{
    if (b_ < 2) throw std::domain_error("GCN base b must be >= 2");
    if (n_ < 1) throw std::domain_error("GCN index n must be >= 1");
    factors_ = factorize(b_);
    value_ = gcn_value(b_, n_);
    mpz_divexact(exponent_.get_mpz_t(), Natural(value_ - 1).get_mpz_t(), n_.get_mpz_t());
}

Natural gcn_value(const Natural& b, const Natural& n)
{
    if (b < 2) throw std::domain_error("GCN base b must be >= 2");
    if (n < 1) throw std::domain_error("GCN index n must be >= 1");
    Natural power;
    mpz_pow_ui(power.get_mpz_t(), b.get_mpz_t(), to_ulong(n, "GCN index n"));
    return n * power + 1;
}

int verdict_rank(const Verdict& v) noexcept
{
    return static_cast<int>(v.index());
}

std::string verdict_tag(const Verdict& v)
{
    static constexpr const char* tags[] = {"Composite", "ProbablePrimeTest1", "ProbablePrimeTest2", "ProvenPrime"};
    return tags[v.index()];
}

std::string composite_kind_name(CompositeKind kind)
{
    switch (kind) {
    case CompositeKind::ParityPrefilter: return "ParityPrefilter";
    case CompositeKind::Test1Failure: return "Test1Failure";
    case CompositeKind::Test2Failure: return "Test2Failure";
    case CompositeKind::SieveDivisor: return "SieveDivisor";
    }
    return "Unknown";
}

std::optional<Composite> parity_prefilter(const GcnCandidate& c)
{
    if (mpz_odd_p(c.b().get_mpz_t()) && mpz_odd_p(c.n().get_mpz_t())) {
        return Composite{CompositeKind::ParityPrefilter, std::nullopt};
    }
    return std::nullopt;
}

Verdict test1(const GcnCandidate& c)
{
    const Natural r = modpow(c.n(), c.exponent(), c.value());
    const bool b_even = mpz_even_p(c.b().get_mpz_t());
    const Natural expected = b_even ? Natural(1) : Natural(c.value() - 1);
    if (r == expected) return ProbablePrimeTest1{};
    return Composite{CompositeKind::Test1Failure, std::nullopt};
}

namespace {

struct Descent {
    Natural K;
    Natural next_level;  // a_{K+1}; unset when K = n r_p
};

// Galloping then bisection over the monotone prefix: a_i == 1 forces
// a_{i-1} == 1 since a_{i-1} = a_i^p. O(log K) modpow calls.
Descent descend(const GcnCandidate& c, const Natural& p, bool root_known = false)
{
    const Natural top = c.n() * exponent_in_base(c, p);
    if (!root_known && level(c, p, 0) != 1) {
        throw InconsistencyError("compute_K: (-n)^(b^n) != 1 mod N; test1 must pass first");
    }
    Natural lo = 0, hi = 1, hi_value;
    while (true) {
        if (hi >= top) {
            hi = top;
            hi_value = level(c, p, top);
            if (hi_value == 1) return {top, {}};
            break;
        }
        hi_value = level(c, p, hi);
        if (hi_value != 1) break;
        lo = hi;
        hi *= 2;
    }
    // a_lo == 1, a_hi != 1.
    while (hi - lo > 1) {
        Natural mid = (lo + hi) / 2;
        Natural value = level(c, p, mid);
        if (value == 1) {
            lo = mid;
        } else {
            hi = mid;
            hi_value = std::move(value);
        }
    }
    return {lo, hi_value};
}

}  // namespace

Natural compute_K(const GcnCandidate& c, const Natural& p)
{
    return descend(c, p).K;
}

namespace {

// a_0 = (-1)^(b^n) n^(b^n) == 1 exactly when test1 passed.
Test2Result test2_checked(const GcnCandidate& c, const Natural& p, bool test1_passed)
{
    const Natural top = c.n() * exponent_in_base(c, p);
    Descent d = descend(c, p, test1_passed);
    Test2Result result;
    result.K = d.K;
    if (result.K == top) {
        result.outcome = Test2Outcome::AllLevelsOne;
        return result;
    }
    result.outcome = cyclotomic_eval(p, d.next_level, c.value()) == 0 ? Test2Outcome::CyclotomicRoot : Test2Outcome::Failed;
    return result;
}

}  // namespace

Test2Result test2_base(const GcnCandidate& c, const Natural& p)
{
    return test2_checked(c, p, false);
}

std::optional<PrimalityCertificate> certify_base(const GcnCandidate& c, const Natural& p, const Natural& K)
{
    const Natural top = c.n() * exponent_in_base(c, p);
    if (sgn(K) < 0 || K >= top) {
        throw std::domain_error("certify_base: K must satisfy 0 <= K < n r_p");
    }
    if (!power_exceeds(p, top - K, c.value() - 1)) return std::nullopt;
    return PrimalityCertificate{c.b(), c.n(), p, K};
}

Evaluation evaluate(const GcnCandidate& c)
{
    Evaluation ev;
    if (auto parity = parity_prefilter(c)) {
        ev.verdict = *parity;
        return ev;
    }
    ev.verdict = test1(c);
    if (std::holds_alternative<Composite>(ev.verdict)) return ev;

    std::set<Natural> passing;
    std::vector<std::pair<Natural, Natural>> witnessed;  // (p, K) from the cyclotomic branch
    for (const auto& f : c.base_factors().factors()) {
        const Test2Result r = test2_checked(c, f.prime, true);
        ev.k_by_base[f.prime] = r.K;
        if (!r.passed()) {
            ev.verdict = Composite{CompositeKind::Test2Failure, f.prime};
            return ev;
        }
        passing.insert(f.prime);
        if (r.outcome == Test2Outcome::CyclotomicRoot) witnessed.emplace_back(f.prime, r.K);
    }

    for (const auto& [p, K] : witnessed) {
        if (auto cert = certify_base(c, p, K)) {
            ev.verdict = ProvenPrime{*cert};
            return ev;
        }
    }
    ev.verdict = ProbablePrimeTest2{std::move(passing)};
    return ev;
}

Verdict run_full_test(const GcnCandidate& c)
{
    return evaluate(c).verdict;
}

bool verify_certificate(const PrimalityCertificate& cert)
{
    if (cert.schema_version != PrimalityCertificate::kSchemaVersion) {
        throw ValidationError("unsupported certificate schema_version " + std::to_string(cert.schema_version));
    }
    if (cert.b < 2) throw ValidationError("certificate b must be >= 2");
    if (cert.n < 1 || !cert.n.fits_ulong_p()) throw ValidationError("certificate n out of range");
    if (sgn(cert.K) < 0) throw ValidationError("certificate K must be non-negative");
    if (cert.p < 2 || !std::holds_alternative<OraclePrime>(trusted_is_prime(cert.p))) {
        throw ValidationError("certificate p = " + to_decimal(cert.p) + " is not a provable prime");
    }
    Natural cofactor;
    const unsigned long r = mpz_remove(cofactor.get_mpz_t(), cert.b.get_mpz_t(), cert.p.get_mpz_t());
    if (r == 0) throw ValidationError("certificate p = " + to_decimal(cert.p) + " does not divide b = " + to_decimal(cert.b));
    const Natural top = cert.n * r;
    if (cert.K >= top) throw ValidationError("certificate K must be below n r_p = " + to_decimal(top));

    const Natural N = gcn_value(cert.b, cert.n);
    Natural exponent, divisor;
    mpz_pow_ui(exponent.get_mpz_t(), cert.b.get_mpz_t(), cert.n.get_ui());
    mpz_pow_ui(divisor.get_mpz_t(), cert.p.get_mpz_t(), to_ulong(cert.K + 1, "certificate K"));
    const Natural witness = modpow(N - cert.n, exact_quotient(exponent, divisor), N);
    if (cyclotomic_eval(cert.p, witness, N) != 0) return false;
    return power_exceeds(cert.p, top - cert.K, N - 1);
}

}  // namespace gcn
