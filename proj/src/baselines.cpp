#include "gcn/baselines.hpp"

#include <array>
#include <stdexcept>

namespace gcn {

namespace {

constexpr std::array<unsigned long, 13> kDeterministicBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
constexpr std::uint64_t kOracleTrialLimit = 10'000;

Natural reduced_coprime_base(const Natural& N, const Natural& a)
{
    if (N < 3 || mpz_even_p(N.get_mpz_t())) throw std::domain_error("probable-prime test: N must be odd and >= 3");
    if (sgn(a) < 0) throw std::domain_error("probable-prime test: base must be non-negative");
    Natural reduced = a % N;
    if (reduced == 0) throw std::domain_error("probable-prime test: base is 0 mod N");
    Natural g;
    mpz_gcd(g.get_mpz_t(), reduced.get_mpz_t(), N.get_mpz_t());
    if (g != 1) throw std::domain_error("probable-prime test: base not coprime to N");
    return reduced;
}

bool strong_round(const Natural& N, const Natural& a, const Natural& odd_part, unsigned long twos)
{
    const Natural minus_one = N - 1;
    Natural x = modpow(a, odd_part, N);
    if (x == 1 || x == minus_one) return true;
    for (unsigned long j = 1; j < twos; ++j) {
        x = (x * x) % N;
        if (x == minus_one) return true;
        if (x == 1) return false;
    }
    return false;
}

}  // namespace

bool fermat_probable_prime(const Natural& N, const Natural& a)
{
    const Natural base = reduced_coprime_base(N, a);
    return modpow(base, N - 1, N) == 1;
}

bool strong_probable_prime(const Natural& N, const Natural& a)
{
    const Natural base = reduced_coprime_base(N, a);
    Natural odd_part = N - 1;
    const unsigned long twos = mpz_scan1(odd_part.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(odd_part.get_mpz_t(), odd_part.get_mpz_t(), twos);
    return strong_round(N, base, odd_part, twos);
}

const Natural& deterministic_oracle_bound()
{
    static const Natural bound("3317044064679887385961981", 10);
    return bound;
}

OracleVerdict trusted_is_prime(const Natural& N, const OracleOptions& options)
{
    if (N < 2) return OracleComposite{};
    for (unsigned long p : kDeterministicBases) {
        if (N == p) return OraclePrime{};
    }
    if (const auto f = small_factor(N, kOracleTrialLimit); f != 0) {
        return Natural(f) == N ? OracleVerdict{OraclePrime{}} : OracleVerdict{OracleComposite{}};
    }
    if (N < Natural(kOracleTrialLimit) * kOracleTrialLimit) return OraclePrime{};

    Natural odd_part = N - 1;
    const unsigned long twos = mpz_scan1(odd_part.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(odd_part.get_mpz_t(), odd_part.get_mpz_t(), twos);

    for (unsigned long a : kDeterministicBases) {
        if (!strong_round(N, Natural(a), odd_part, twos)) return OracleComposite{};
    }
    if (N < deterministic_oracle_bound()) return OraclePrime{};

    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(static_cast<unsigned long>(options.seed));
    const Natural span = N - 3;
    for (int i = 0; i < options.random_rounds; ++i) {
        Natural a = rng.get_z_range(span) + 2;  // [2, N-2]
        if (!strong_round(N, a, odd_part, twos)) return OracleComposite{};
    }
    return OracleProbablePrime{options.random_rounds};
}

bool oracle_says_prime(const OracleVerdict& v)
{
    return !std::holds_alternative<OracleComposite>(v);
}

std::uint64_t small_factor(const Natural& N, std::uint64_t limit)
{
    if (N < 2) throw std::domain_error("small_factor: N must be >= 2");
    if (limit >= 2 && mpz_even_p(N.get_mpz_t())) return 2;
    if (N.fits_ulong_p()) {
        const unsigned long x = N.get_ui();
        for (std::uint64_t d = 3; d <= limit; d += 2) {
            if (d > x / d) return x <= limit ? x : 0;
            if (x % d == 0) return d;
        }
        return 0;
    }
    for (std::uint64_t d = 3; d <= limit; d += 2) {
        if (Natural(d) * d > N) return N <= limit ? N.get_ui() : 0;
        if (mpz_divisible_ui_p(N.get_mpz_t(), d)) return d;
    }
    return 0;
}

}  // namespace gcn
