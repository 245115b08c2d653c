#include "fqlab/numtheory.hpp"

#include <doctest.h>

#include <numeric>

using namespace fqlab::numtheory;

namespace {

// Oracles written straight from the definitions, with no shared code.

bool prime_by_trial(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool np_by_divisors(u64 n, u64 p) {
    if (n % p != 0 || n % (p * p) == 0) return false;
    for (u64 d = 2; d <= n; ++d)
        if (n % d == 0 && d % p == 1) return false;
    return true;
}

bool pp_by_gcd(u64 p, u64 a) { return prime_by_trial(p) && std::gcd(a, p) == 1 && std::gcd(a, p - 1) <= 2; }

bool sp_by_scan(u64 n, u64 a) {
    for (u64 p = 2; p <= n; ++p)
        if (n % p == 0 && pp_by_gcd(p, a) && np_by_divisors(n, p)) return true;
    return false;
}

} // namespace

TEST_CASE("primes agree with trial division") {
    CHECK(primes_up_to(10).primes == std::vector<u64>{2, 3, 5, 7});
    CHECK(primes_up_to(100).primes.size() == 25);
    const auto big = primes_up_to(1000000);
    CHECK(big.primes.size() == 78498);
    for (std::size_t i = 0; i < big.primes.size(); i += 997) CHECK(prime_by_trial(big.primes[i]));
    for (u64 n = 1; n < 5000; ++n) CHECK(is_prime(n) == prime_by_trial(n));
}

TEST_CASE("factorization multiplies back") {
    for (u64 n = 1; n < 20000; n += 7) {
        const auto f = factor(n);
        CHECK(f.product() == n);
        u64 count = 0;
        for (u64 d = 1; d <= n; ++d) count += n % d == 0;
        CHECK(divisors(f).size() == count);
        CHECK(f.divisor_count() == count);
    }
    CHECK(factor(u64{1} << 62).valuation(2) == 62);
}

TEST_CASE("membership tests match the definitions") {
    for (u64 p : {2, 3, 5, 7, 11, 13})
        for (u64 n = 1; n <= 3000; ++n) CHECK(np_contains(n, p) == np_by_divisors(n, p));
    for (u64 a = 1; a <= 24; ++a) {
        for (u64 p = 2; p < 400; ++p)
            if (prime_by_trial(p)) CHECK(pp_contains(p, a) == pp_by_gcd(p, a));
        for (u64 n = 1; n <= 300; ++n) CHECK(sp_contains(n, a) == sp_by_scan(n, a));
    }
    CHECK_THROWS_AS(np_contains(10, 4), std::invalid_argument);
    CHECK(np_contains(6, 3));
    CHECK_FALSE(np_contains(12, 3));  // 4 ≡ 1 mod 3
    CHECK_FALSE(np_contains(1, 2));
}

TEST_CASE("NP_p membership implies p | n and p^2 does not") {
    for (u64 p : {2, 3, 5, 7, 11, 13, 97})
        for (u64 n = 1; n <= 20000; ++n)
            if (np_contains(n, p)) {
                CHECK(n % p == 0);
                CHECK(n % (p * p) != 0);
            }
}

TEST_CASE("sieve_np agrees pointwise for primes up to 97") {
    const u64 limit = 20000;
    for (u64 p : primes_up_to(97).primes) {
        const auto bits = sieve_np(p, limit);
        REQUIRE(bits.size() == limit);
        u64 mismatches = 0;
        for (u64 n = 1; n <= limit; ++n) mismatches += bits[n - 1] != np_contains(n, p);
        CHECK_MESSAGE(mismatches == 0, "p = " << p);
    }
}

TEST_CASE("monotone in a under divisibility") {
    for (u64 a = 1; a <= 24; ++a)
        for (u64 b = a; b <= 24; b += a)
            for (u64 n = 1; n <= 10000; n += 3) {
                if (sp_contains(n, b)) CHECK_MESSAGE(sp_contains(n, a), n << " " << a << " " << b);
            }
}

TEST_CASE("PP_1 is every prime") {
    for (u64 p : primes_up_to(5000).primes) CHECK(pp_contains(p, 1));
}

TEST_CASE("segment size and threads do not change counts") {
    const u64 limit = 300000;
    const std::vector<u64> cps{1000, 12345, 100000, 299999, 300000};
    for (const char* name : {"np:3", "np:7", "sp:6", "sp:1", "squarefree", "primes"}) {
        const auto base = density_series(name, limit, cps, {kDefaultSegment, 1});
        for (std::size_t seg : {1024UL, 4099UL, 65536UL})
            for (unsigned threads : {1U, 3U, 4U}) {
                const auto other = density_series(name, limit, cps, {seg, threads});
                CHECK_MESSAGE(other.checkpoints == base.checkpoints, name << " seg " << seg << " t " << threads);
                CHECK(other.to_csv() == base.to_csv());
            }
    }
}

TEST_CASE("density counts match a pointwise recount") {
    const auto s = density_series("np:3", 1000, {10, 100, 1000});
    u64 count = 0;
    std::size_t k = 0;
    for (u64 n = 1; n <= 1000; ++n) {
        count += np_by_divisors(n, 3);
        if (n == s.checkpoints[k].limit) CHECK(s.checkpoints[k++].count == count);
    }
    const auto all = density_series("all", 100, {10, 100});
    CHECK(all.to_csv() == "limit,count,density\n10,10,1.000000\n100,100,1.000000\n");
}

TEST_CASE("ratio strings round half up") {
    CHECK(format_ratio(1, 8) == "0.125000");
    CHECK(format_ratio(1, 3) == "0.333333");
    CHECK(format_ratio(2, 3) == "0.666667");
    CHECK(format_ratio(1, 2000000) == "0.000001");  // exactly half a unit
    CHECK(format_ratio(0, 7) == "0.000000");
    CHECK(default_checkpoints(1000) == std::vector<u64>{10, 100, 1000});
    CHECK(default_checkpoints(250) == std::vector<u64>{10, 100, 250});
}

TEST_CASE("predicate names") {
    CHECK_THROWS_AS(make_predicate("np:4", 10), std::invalid_argument);
    CHECK_THROWS_AS(make_predicate("bogus", 10), std::invalid_argument);
    CHECK_THROWS_AS(make_predicate("sp:0", 10), std::invalid_argument);
}

TEST_CASE("witness primes") {
    auto even = [](u64 n) { return n % 2 == 0; };
    const auto w = witness_primes(even, 1, 50, 1000);
    bool saw3 = false;
    for (const auto& x : w) {
        CHECK(np_contains(x.witness, x.prime));
        CHECK(x.witness % 2 == 0);
        if (x.prime == 3) saw3 = x.witness == 6;
    }
    CHECK(saw3);
    CHECK(witness_primes([](u64 n) { return n == 1; }, 4, 100, 1000).empty());
    auto squarefree = [](u64 n) {
        for (u64 d = 2; d * d <= n; ++d)
            if (n % (d * d) == 0) return false;
        return true;
    };
    CHECK(witness_primes(squarefree, 2, 50, 10000).size() < witness_primes(squarefree, 2, 200, 10000).size());
}
