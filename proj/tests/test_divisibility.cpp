#include <doctest.h>

#include "gcn/baselines.hpp"
#include "gcn/core.hpp"
#include "gcn/divisibility.hpp"

#include <set>

using gcn::Natural;

namespace {

// C_b(n) mod p by building the full integer.
unsigned long brute_residue(unsigned long b, unsigned long n, unsigned long p)
{
    if (n == 0) return 1 % p;
    return mpz_fdiv_ui(gcn::gcn_value(b, n).get_mpz_t(), p);
}

bool divides_gcn(const Natural& p, const Natural& b, const Natural& n)
{
    return gcn::gcn_value(b, n) % p == 0;
}

}  // namespace

TEST_CASE("prop1_index examples")
{
    CHECK(gcn::prop1_index(3, 1, 5) == 7);
    CHECK(gcn::gcn_value(3, 7) == 15310);
    CHECK(15310 % 5 == 0);
    CHECK(gcn::prop1_index(2, 1, 3) == 1);
    CHECK(gcn::prop1_index(2, 2, 3) == 2);
    CHECK(divides_gcn(3, 2, 2));
}

TEST_CASE("prop1_index errors")
{
    CHECK_THROWS_AS(gcn::prop1_index(6, 1, 3), std::domain_error);
    CHECK_THROWS_AS(gcn::prop1_index(5, 1, 4), std::domain_error);
    CHECK_THROWS_AS(gcn::prop1_index(2, 1, 2), std::domain_error);
    // Smallest admissible index: (3 - 1)(2 - 1) - 1 = 1.
    CHECK(gcn::prop1_index(3, 1, 2) == 1);
    CHECK(gcn::prop1_index(7, 0, 5) == 4);
}

TEST_CASE("divisor index exhaustive: p | C_b(n_b(k, p))")
{
    int checked = 0;
    for (unsigned long b = 2; b <= 30; ++b) {
        for (unsigned long k = 1; k <= 5; ++k) {
            for (unsigned long p : gcn::primes_up_to(50)) {
                if (b % p == 0) continue;
                Natural bk;
                mpz_ui_pow_ui(bk.get_mpz_t(), b, k);
                const Natural expected = (bk - k) * (p - 1) - k;
                if (expected < 1) {
                    CHECK_THROWS_AS(gcn::prop1_index(b, k, p), std::range_error);
                    continue;
                }
                const Natural n = gcn::prop1_index(b, k, p);
                REQUIRE(n == expected);
                // C_b(n) mod p via modpow: n is too large to form C_b(n).
                REQUIRE(((n % p) * gcn::modpow(b, n, p) + 1) % p == 0);
                ++checked;
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("prop2_extend examples")
{
    CHECK(gcn::prop2_extend(2, 1, 3, 2) == std::vector<Natural>{7, 13});
    CHECK(divides_gcn(3, 2, 7));
    CHECK(gcn::gcn_value(2, 7) == 897);
    CHECK(divides_gcn(3, 2, 13));
    CHECK(gcn::prop2_extend(3, 7, 5, 1) == std::vector<Natural>{27});
    CHECK(divides_gcn(5, 3, 27));
    CHECK(gcn::prop2_extend(2, 1, 3, 0).empty());
    CHECK_THROWS_AS(gcn::prop2_extend(2, 3, 3, 1), std::domain_error);  // C_2(3) = 25
    CHECK_THROWS_AS(gcn::prop2_extend(6, 1, 3, 1), std::domain_error);  // 3 | b
}

TEST_CASE("periodic extension exhaustive over b <= 20, n <= 20, p <= 100")
{
    int checked = 0;
    for (unsigned long b = 2; b <= 20; ++b) {
        for (unsigned long n = 1; n <= 20; ++n) {
            for (unsigned long p : gcn::primes_up_to(100)) {
                if (brute_residue(b, n, p) != 0) continue;
                const auto next = gcn::prop2_extend(b, n, p, 2);
                REQUIRE(next.size() == 2);
                const unsigned long step = p * gcn::multiplicative_order(b, p).get_ui();
                REQUIRE(next[0] == n + step);
                REQUIRE(next[1] == n + 2 * step);
                for (const auto& m : next) REQUIRE(divides_gcn(p, b, m));
                ++checked;
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("prop3_bound examples")
{
    CHECK(gcn::prop3_bound(2, 4) == 8);
    CHECK(gcn::prop3_bound(1, 2) == 3);
    CHECK(gcn::prop3_bound(2, 3) == 17);
    CHECK(gcn::prop3_bound(4, 2) == gcn::prop3_bound(2, 4));
    CHECK_THROWS_AS(gcn::prop3_bound(3, 3), std::domain_error);
    CHECK_THROWS_AS(gcn::prop3_bound(0, 3), std::domain_error);

    std::set<Natural> gcds_1_2, gcds_2_4;
    for (unsigned long b = 2; b <= 200; ++b) {
        gcds_1_2.insert(gcd(gcn::gcn_value(b, 1), gcn::gcn_value(b, 2)));
        gcds_2_4.insert(gcd(gcn::gcn_value(b, 2), gcn::gcn_value(b, 4)));
    }
    CHECK(gcds_1_2 == std::set<Natural>{1, 3});
    for (const auto& g : gcds_2_4) CHECK(8 % g == 0);
}

TEST_CASE("gcd divides the bound for m < n <= 12, b <= 200")
{
    for (unsigned long n = 2; n <= 12; ++n) {
        for (unsigned long m = 1; m < n; ++m) {
            const Natural bound = gcn::prop3_bound(n, m);
            REQUIRE(bound > 0);
            for (unsigned long b = 2; b <= 200; ++b) {
                const Natural g = gcd(gcn::gcn_value(b, n), gcn::gcn_value(b, m));
                REQUIRE(bound % g == 0);
            }
        }
    }
}

TEST_CASE("sieve_pattern examples")
{
    const auto p23 = gcn::sieve_pattern(2, 3);
    CHECK(p23.period == 6);
    CHECK(p23.residues == std::vector<std::uint64_t>{1, 2});
    CHECK(p23.to_row() == "3 6 1,2");

    const auto p32 = gcn::sieve_pattern(3, 2);
    CHECK(p32.period == 2);
    CHECK(p32.residues == std::vector<std::uint64_t>{1});

    const auto p25 = gcn::sieve_pattern(2, 5);
    CHECK(p25.period == 20);
    std::vector<std::uint64_t> brute;
    for (unsigned long n = 0; n < 20; ++n) {
        if (brute_residue(2, n, 5) == 0) brute.push_back(n);
    }
    CHECK(p25.residues == brute);

    CHECK_THROWS_AS(gcn::sieve_pattern(6, 3), std::domain_error);
    CHECK_THROWS_AS(gcn::sieve_pattern(6, 9), std::domain_error);
}

TEST_CASE("sieve patterns are exact over three periods")
{
    for (unsigned long b = 2; b <= 40; ++b) {
        for (unsigned long p : gcn::primes_up_to(60)) {
            if (b % p == 0) continue;
            const auto pattern = gcn::sieve_pattern(b, p);
            REQUIRE(pattern.period == p * gcn::multiplicative_order(b, p).get_ui());
            std::set<std::uint64_t> brute;
            for (std::uint64_t n = 1; n <= 3 * pattern.period; ++n) {
                const bool divisible = brute_residue(b, n, p) == 0;
                REQUIRE(divisible == pattern.matches(n));
                if (divisible) brute.insert(n % pattern.period);
            }
            REQUIRE(std::vector<std::uint64_t>(brute.begin(), brute.end()) == pattern.residues);
        }
    }
}

TEST_CASE("sieve_filter examples")
{
    // C_2(n) mod 3 vanishes for n == 1, 2 (mod 6); n = 1 stays since C_2(1) = 3.
    CHECK(gcn::sieve_filter(2, 1, 10, 3) == std::vector<std::uint64_t>{1, 3, 4, 5, 6, 9, 10});
    CHECK(gcn::sieve_filter(2, 141, 141, 1000) == std::vector<std::uint64_t>{141});
    CHECK(gcn::sieve_filter(2, 5, 4, 1000).empty());
    CHECK_THROWS_AS(gcn::sieve_filter(2, 1, 10, 1), std::domain_error);
}

TEST_CASE("sieve_filter keeps n when C_b(n) is the sieving prime")
{
    // C_2(1) = 3, C_2(2) = 9, C_4(1) = 5, C_6(1) = 7, C_2(3) = 25.
    const auto s2 = gcn::sieve_filter(2, 1, 3, 7);
    CHECK(s2 == std::vector<std::uint64_t>{1});
    CHECK(gcn::sieve_filter(4, 1, 1, 5) == std::vector<std::uint64_t>{1});
    CHECK(gcn::sieve_filter(6, 1, 1, 7) == std::vector<std::uint64_t>{1});
}

TEST_CASE("sieve soundness and completeness against the oracle")
{
    for (unsigned long b = 2; b <= 30; ++b) {
        const auto patterns = gcn::sieve_patterns(b, 200);
        const auto hits = gcn::sieve_hits(b, 1, 40, patterns);
        for (unsigned long n = 1; n <= 40; ++n) {
            const Natural N = gcn::gcn_value(b, n);
            const auto& hit = hits[n - 1];
            if (hit) {
                REQUIRE(N % *hit == 0);
                REQUIRE(N != *hit);
                if (N < 1'000'000'000) REQUIRE(std::holds_alternative<gcn::OracleComposite>(gcn::trusted_is_prime(N)));
                // Smallest sieving prime wins.
                for (unsigned long q : gcn::primes_up_to(*hit - 1)) {
                    if (b % q != 0) REQUIRE((N % q != 0 || N == q));
                }
            } else {
                for (unsigned long q : gcn::primes_up_to(200)) {
                    if (b % q != 0) REQUIRE((N % q != 0 || N == q));
                }
            }
        }
    }
}
