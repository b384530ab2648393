#include "gcn/bigarith.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gcn {

namespace {

constexpr std::uint64_t kTrialDivisionLimit = 1'000'000;

void require_non_negative(const Natural& x, const char* what)
{
    if (sgn(x) < 0) throw std::domain_error(std::string(what) + " must be non-negative");
}

const std::vector<std::uint64_t>& trial_primes()
{
    static const std::vector<std::uint64_t> primes = primes_up_to(kTrialDivisionLimit);
    return primes;
}

// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
// composite n, trying polynomials x^2 + c for c = 1, 2, ... in order.
Natural rho_split(const Natural& n)
{
    for (unsigned long c = 1;; ++c) {
        Natural y = 2, x, q = 1, g = 1, ys, t;
        unsigned long r = 1;
        constexpr unsigned long batch = 128;
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) {
                y = (y * y + c) % n;
            }
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (unsigned long i = 0; i < std::min(batch, r - k); ++i) {
                    y = (y * y + c) % n;
                    t = abs(x - y);
                    q = (q * t) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += batch;
            }
            r *= 2;
        }
        if (g == n) {
            // Batched product overshot; replay one step at a time.
            do {
                ys = (ys * ys + c) % n;
                t = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split_into(const Natural& n, std::vector<Natural>& out)
{
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out.push_back(n);
        return;
    }
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        Natural root;
        mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
        split_into(root, out);
        split_into(root, out);
        return;
    }
    Natural d = rho_split(n);
    split_into(d, out);
    split_into(Natural(n / d), out);
}

}  // namespace

Natural parse_natural(std::string_view text)
{
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw std::invalid_argument("not a decimal natural: '" + std::string(text) + "'");
    }
    return Natural(std::string(text), 10);
}

std::string to_decimal(const Natural& x)
{
    return x.get_str(10);
}

unsigned long to_ulong(const Natural& x, const char* what)
{
    if (sgn(x) < 0 || !x.fits_ulong_p()) {
        throw std::domain_error(std::string(what) + " out of supported range: " + to_decimal(x));
    }
    return x.get_ui();
}

FactoredBase::FactoredBase(std::vector<PrimePower> factors)
    : factors_(std::move(factors))
{
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].exponent == 0) throw std::invalid_argument("factor exponent must be >= 1");
        if (factors_[i].prime < 2) throw std::invalid_argument("factor must be >= 2");
        if (i > 0 && !(factors_[i - 1].prime < factors_[i].prime)) {
            throw std::invalid_argument("factors must be strictly increasing");
        }
    }
}

Natural FactoredBase::value() const
{
    Natural v = 1, pk;
    for (const auto& f : factors_) {
        mpz_pow_ui(pk.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
        v *= pk;
    }
    return v;
}

unsigned long FactoredBase::exponent_of(const Natural& p) const
{
    for (const auto& f : factors_) {
        if (f.prime == p) return f.exponent;
    }
    return 0;
}

Natural modpow(const Natural& base, const Natural& exponent, const Natural& modulus)
{
    if (modulus < 2) throw std::domain_error("modpow: modulus must be >= 2");
    require_non_negative(base, "modpow base");
    require_non_negative(exponent, "modpow exponent");
    Natural r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

FactoredBase factorize(const Natural& x)
{
    if (x < 2) throw std::domain_error("factorize: input must be >= 2");

    std::vector<PrimePower> found;
    Natural rest = x;
    if (x.fits_ulong_p()) {
        unsigned long small = x.get_ui();
        for (std::uint64_t p : trial_primes()) {
            if (p * p > small) break;
            if (small % p != 0) continue;
            unsigned long e = 0;
            do {
                small /= p;
                ++e;
            } while (small % p == 0);
            found.push_back({Natural(p), e});
        }
        rest = small;
        // Whatever is left is 1, a prime, or a product of primes above 10^6.
        if (small < kTrialDivisionLimit * kTrialDivisionLimit) {
            if (small > 1) found.push_back({rest, 1});
            return FactoredBase(std::move(found));
        }
        found.clear();
        rest = x;
    }
    for (std::uint64_t p : trial_primes()) {
        if (rest == 1) break;
        if (Natural(p) * p > rest) {
            break;
        }
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            unsigned long e = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++e;
            }
            found.push_back({Natural(p), e});
        }
    }

    if (rest > 1) {
        std::vector<Natural> large;
        split_into(rest, large);
        std::sort(large.begin(), large.end());
        for (const auto& q : large) {
            if (!found.empty() && found.back().prime == q) {
                ++found.back().exponent;
            } else {
                found.push_back({q, 1});
            }
        }
    }
    return FactoredBase(std::move(found));
}

Natural multiplicative_order(const Natural& a, const Natural& p)
{
    require_non_negative(a, "multiplicative_order base");
    if (p < 2 || !is_probable_prime(p)) throw std::domain_error("multiplicative_order: modulus must be prime");
    if (mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
        throw std::domain_error("multiplicative_order: p divides a");
    }
    if (p == 2) return 1;

    Natural order = p - 1;
    const FactoredBase group_order = factorize(order);
    for (const auto& f : group_order.factors()) {
        for (unsigned long i = 0; i < f.exponent; ++i) {
            Natural candidate = order / f.prime;
            if (modpow(a, candidate, p) != 1) break;
            order = candidate;
        }
    }
    return order;
}

Natural cyclotomic_eval(const Natural& p, const Natural& x, const Natural& modulus)
{
    if (modulus < 2) throw std::domain_error("cyclotomic_eval: modulus must be >= 2");
    if (p < 2 || !is_probable_prime(p)) throw std::domain_error("cyclotomic_eval: index must be prime");
    require_non_negative(x, "cyclotomic_eval argument");

    const Natural base = x % modulus;
    // Invariant: sum = 1 + base + ... + base^(k-1), power = base^k.
    Natural sum = 1, power = base;
    for (long bit = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
        sum = (sum * (power + 1)) % modulus;
        power = (power * power) % modulus;
        if (mpz_tstbit(p.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
            sum = (sum * base + 1) % modulus;
            power = (power * base) % modulus;
        }
    }
    return Natural(sum % modulus);
}

bool power_exceeds(const Natural& p, const Natural& e, const Natural& bound)
{
    if (p < 2) throw std::domain_error("power_exceeds: base must be >= 2");
    require_non_negative(e, "power_exceeds exponent");
    if (sgn(bound) < 0) return true;

    // 2^(bits(p)-1) <= p < 2^bits(p) brackets p^(2e) between powers of two.
    const Natural bound_bits = sgn(bound) == 0 ? Natural(0) : Natural(mpz_sizeinbase(bound.get_mpz_t(), 2));
    const Natural p_bits = Natural(mpz_sizeinbase(p.get_mpz_t(), 2));
    const Natural two_e = 2 * e;
    if (two_e * (p_bits - 1) >= bound_bits) return true;   // p^(2e) >= 2^bits(bound) > bound
    if (two_e * p_bits < bound_bits) return false;         // p^(2e) < 2^(bits(bound)-1) <= bound

    Natural power;
    mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), to_ulong(two_e, "power_exceeds exponent"));
    return power > bound;
}

Natural digit_count(const Natural& x)
{
    if (x < 1) throw std::domain_error("digit_count: input must be >= 1");
    std::size_t d = mpz_sizeinbase(x.get_mpz_t(), 10);
    Natural lower;
    mpz_ui_pow_ui(lower.get_mpz_t(), 10, d - 1);
    if (x < lower) --d;
    return Natural(static_cast<unsigned long>(d));
}

bool is_probable_prime(const Natural& x)
{
    if (x < 2) return false;
    return mpz_probab_prime_p(x.get_mpz_t(), 30) > 0;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit)
{
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

}  // namespace gcn
