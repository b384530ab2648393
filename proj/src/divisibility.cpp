#include "gcn/divisibility.hpp"

#include "gcn/core.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gcn {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod_u64(u64 a, u64 e, u64 m)
{
    u64 r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Inverse of a mod prime p by Fermat.
u64 invmod_prime(u64 a, u64 p)
{
    return powmod_u64(a, p - 2, p);
}

void require_prime(const Natural& p, const char* what)
{
    if (p < 2 || !is_probable_prime(p)) throw std::domain_error(std::string(what) + ": p must be prime");
}

// C_b(n) mod p without forming C_b(n).
Natural gcn_residue(const Natural& b, const Natural& n, const Natural& p)
{
    return Natural((n % p) * modpow(b % p, n, p) + 1) % p;
}

}  // namespace

Natural prop1_index(const Natural& b, const Natural& k, const Natural& p)
{
    require_prime(p, "prop1_index");
    if (b < 2) throw std::domain_error("prop1_index: b must be >= 2");
    if (mpz_divisible_p(b.get_mpz_t(), p.get_mpz_t())) throw std::domain_error("prop1_index: p divides b");
    Natural bk;
    mpz_pow_ui(bk.get_mpz_t(), b.get_mpz_t(), to_ulong(k, "prop1_index k"));
    Natural index = (bk - k) * (p - 1) - k;
    if (index < 1) throw std::range_error("prop1_index: n_b(k, p) = " + index.get_str() + " is below 1");
    return index;
}

std::vector<Natural> prop2_extend(const Natural& b, const Natural& n, const Natural& p, std::size_t count)
{
    require_prime(p, "prop2_extend");
    if (b < 2 || n < 1) throw std::domain_error("prop2_extend: need b >= 2 and n >= 1");
    if (gcn_residue(b, n, p) != 0) {
        throw std::domain_error("prop2_extend: p = " + to_decimal(p) + " does not divide C_b(n)");
    }
    const Natural step = p * multiplicative_order(b, p);
    std::vector<Natural> out;
    out.reserve(count);
    for (std::size_t m = 1; m <= count; ++m) out.push_back(n + step * static_cast<unsigned long>(m));
    return out;
}

Natural prop3_bound(const Natural& n, const Natural& m)
{
    if (n < 1 || m < 1) throw std::domain_error("prop3_bound: indices must be >= 1");
    if (n == m) throw std::domain_error("prop3_bound: indices must differ");
    Natural g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
    const unsigned long alpha = to_ulong(Natural(m / g), "prop3_bound alpha");
    const unsigned long beta = to_ulong(Natural(n / g), "prop3_bound beta");
    Natural lhs, rhs;
    mpz_pow_ui(lhs.get_mpz_t(), n.get_mpz_t(), alpha);
    mpz_pow_ui(rhs.get_mpz_t(), m.get_mpz_t(), beta);
    // (-1)^(alpha + beta - 1) is +1 when alpha + beta is odd.
    const bool plus = ((alpha + beta) % 2) == 1;
    return abs(plus ? Natural(lhs + rhs) : Natural(lhs - rhs));
}

bool SievePattern::matches(std::uint64_t n) const
{
    return period != 0 && std::binary_search(residues.begin(), residues.end(), n % period);
}

std::string SievePattern::to_row() const
{
    std::ostringstream os;
    os << p << ' ' << period << ' ';
    if (residues.empty()) os << '-';
    for (std::size_t i = 0; i < residues.size(); ++i) {
        if (i) os << ',';
        os << residues[i];
    }
    return os.str();
}

SievePattern sieve_pattern(const Natural& b, std::uint64_t p)
{
    require_prime(Natural(p), "sieve_pattern");
    if (p > 0xffff'ffffULL) throw std::domain_error("sieve_pattern: sieving primes must be below 2^32");
    if (b < 2) throw std::domain_error("sieve_pattern: b must be >= 2");
    const u64 b_mod = mpz_fdiv_ui(b.get_mpz_t(), p);
    if (b_mod == 0) throw std::domain_error("sieve_pattern: p divides b");

    const u64 h = multiplicative_order(Natural(b_mod), Natural(p)).get_ui();
    SievePattern pattern{p, p * h, {}};
    pattern.residues.reserve(h);

    const u64 h_inv = invmod_prime(h % p, p);
    u64 b_pow = 1;  // b^j mod p
    for (u64 j = 0; j < h; ++j) {
        // n == j (mod h) and n == -(b^j)^(-1) (mod p).
        const u64 t = (p - invmod_prime(b_pow, p)) % p;
        const u64 s = mulmod((t + p - j % p) % p, h_inv, p);
        pattern.residues.push_back(j + h * s);
        b_pow = mulmod(b_pow, b_mod, p);
    }
    std::sort(pattern.residues.begin(), pattern.residues.end());
    return pattern;
}

std::vector<SievePattern> sieve_patterns(const Natural& b, std::uint64_t prime_limit)
{
    std::vector<SievePattern> patterns;
    for (u64 p : primes_up_to(prime_limit)) {
        if (mpz_divisible_ui_p(b.get_mpz_t(), p)) continue;
        patterns.push_back(sieve_pattern(b, p));
    }
    return patterns;
}

std::vector<std::optional<std::uint64_t>> sieve_hits(const Natural& b, std::uint64_t n_from, std::uint64_t n_to,
                                                     const std::vector<SievePattern>& patterns)
{
    if (n_from > n_to) return {};
    if (n_from == 0) throw std::domain_error("sieve: n must be >= 1");
    std::vector<std::optional<u64>> hits(n_to - n_from + 1);

    for (const auto& pattern : patterns) {
        for (u64 r : pattern.residues) {
            // First n >= n_from with n == r (mod period).
            const u64 offset = (r + pattern.period - n_from % pattern.period) % pattern.period;
            if (offset > n_to - n_from) continue;
            for (u64 n = n_from + offset;; n += pattern.period) {
                auto& slot = hits[n - n_from];
                if (!slot) {
                    // C_b(n) >= n 2^n + 1 exceeds every sieving prime (< 2^32) once n >= 28.
                    const bool is_the_prime = n < 28 && gcn_value(b, Natural(n)) == pattern.p;
                    if (!is_the_prime) slot = pattern.p;
                }
                if (n_to - n < pattern.period) break;
            }
        }
    }
    return hits;
}

std::vector<std::uint64_t> sieve_filter(const Natural& b, std::uint64_t n_from, std::uint64_t n_to,
                                        std::uint64_t prime_limit)
{
    if (prime_limit < 2) throw std::domain_error("sieve_filter: prime_limit must be >= 2");
    const auto hits = sieve_hits(b, n_from, n_to, sieve_patterns(b, prime_limit));
    std::vector<u64> survivors;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (!hits[i]) survivors.push_back(n_from + i);
    }
    return survivors;
}

}  // namespace gcn
