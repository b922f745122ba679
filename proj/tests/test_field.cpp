#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "thetaforge/field.hpp"

using namespace thetaforge;

TEST_CASE("prime and prime-power detection") {
    CHECK(is_prime(2));
    CHECK(is_prime(13));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(9));

    std::uint32_t p = 0, k = 0;
    CHECK(is_prime_power(9, &p, &k));
    CHECK(p == 3);
    CHECK(k == 2);
    CHECK(is_prime_power(8, &p, &k));
    CHECK(p == 2);
    CHECK(k == 3);
    CHECK_FALSE(is_prime_power(6));
    CHECK_FALSE(is_prime_power(1));
}

TEST_CASE("additive arithmetic in prime and extension fields") {
    Field f5(5);
    CHECK(f5.add(3, 4) == 2);
    Field f2(2);
    CHECK(f2.add(1, 1) == 0);

    // q=9, p=3: the generator coordinate is the element with digit vector
    // (0,1), packed base-3 as value 3; x + 2x = 3x = 0 in characteristic 3
    Field f9(9);
    FieldElement x = 3;
    FieldElement two_x = f9.add(x, x);
    CHECK(f9.add(x, two_x) == 0);
}

TEST_CASE("multiplicative arithmetic: inverse and power") {
    Field f5(5);
    // oracle: brute-force search for the inverse of 2 mod 5
    FieldElement expected = 0;
    for (FieldElement b = 1; b < 5; ++b)
        if (2 * b % 5 == 1) expected = b;
    CHECK(expected == 3);
    CHECK(f5.inv(2) == expected);
    CHECK(f5.inv(1) == 1);
    Field f9(9);
    CHECK(f9.inv(1) == 1);

    // oracle: repeated multiplication for 3^6 mod 7 (Fermat)
    Field f7(7);
    FieldElement acc = 1;
    for (int i = 0; i < 6; ++i) acc = static_cast<FieldElement>(acc * 3 % 7);
    CHECK(acc == 1);
    CHECK(f7.pow(3, 6) == acc);

    CHECK_THROWS(f5.inv(0));
}

TEST_CASE("field axioms, exhaustive for small q") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        CAPTURE(q);
        Field f(q);
        for (FieldElement a = 0; a < q; ++a) {
            for (FieldElement b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                for (FieldElement c = 0; c < q; ++c) {
                    CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
            if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
            CHECK(f.add(a, f.neg(a)) == 0);
            CHECK(f.mul(a, 1) == a);
        }
    }
}

namespace {

// independent polynomial multiplication mod the field's modulus, digitwise
FieldElement table_mul(std::uint32_t p, std::uint32_t k, const std::vector<std::uint32_t>& mod,
                       FieldElement a, FieldElement b) {
    auto digits = [&](FieldElement v) {
        std::vector<std::uint32_t> d(2 * k, 0);
        for (std::uint32_t i = 0; i < k; ++i) {
            d[i] = v % p;
            v /= p;
        }
        return d;
    };
    auto da = digits(a), db = digits(b);
    std::vector<std::uint32_t> prod(2 * k, 0);
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    // reduce by the monic modulus
    for (int deg = static_cast<int>(2 * k) - 2; deg >= static_cast<int>(k); --deg) {
        const std::uint32_t lead = prod[deg];
        if (lead == 0) continue;
        for (std::uint32_t i = 0; i <= k; ++i) {
            const std::uint32_t pos = deg - k + i;
            prod[pos] = (prod[pos] + p * p - lead * mod[i] % p) % p;
        }
    }
    FieldElement out = 0;
    for (int i = static_cast<int>(k) - 1; i >= 0; --i) out = out * p + prod[i];
    return out;
}

}  // namespace

TEST_CASE("extension multiplication matches an independent table") {
    for (std::uint32_t q : {4u, 8u, 9u}) {
        CAPTURE(q);
        Field f(q);
        const auto& mod = f.modulus();
        REQUIRE(mod.size() == f.k() + 1);
        REQUIRE(mod.back() == 1);
        // the modulus is irreducible: no root and, for k<=3, no linear factor
        // suffices; check non-vanishing at every field point of F_p
        for (std::uint32_t x = 0; x < f.p(); ++x) {
            std::uint32_t val = 0, pw = 1;
            for (std::uint32_t c : mod) {
                val = (val + c * pw) % f.p();
                pw = pw * x % f.p();
            }
            CHECK(val != 0);
        }
        for (FieldElement a = 0; a < q; ++a)
            for (FieldElement b = 0; b < q; ++b)
                CHECK(f.mul(a, b) == table_mul(f.p(), f.k(), mod, a, b));
    }
}

TEST_CASE("largest prime power fitting a vertex budget") {
    // oracle: enumerate prime powers upward
    auto oracle = [](std::uint64_t bound, std::uint32_t ell) {
        std::uint64_t best = 0;
        for (std::uint64_t q = 2; q <= bound; ++q) {
            if (!is_prime_power(q)) continue;
            std::uint64_t v = 2;
            bool fits = true;
            for (std::uint32_t i = 0; i < ell && fits; ++i) {
                if (v > bound / q) fits = false;
                v *= q;
            }
            if (fits && v <= bound) best = q;
        }
        return best;
    };
    CHECK(largest_prime_power_with(54, 3).q == 3);
    CHECK(oracle(54, 3) == 3);
    CHECK(largest_prime_power_with(250, 3).q == 5);
    CHECK(oracle(250, 3) == 5);
    CHECK(largest_prime_power_with(8, 2).q == 2);
    for (std::uint64_t bound : {20ull, 100ull, 1000ull, 54321ull})
        for (std::uint32_t ell : {2u, 3u})
            CHECK(largest_prime_power_with(bound, ell).q == oracle(bound, ell));
    CHECK_THROWS(largest_prime_power_with(7, 2));
}

TEST_CASE("random elements: determinism, coverage, frequency") {
    Field f3(3);
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(f3.random_element(a) == f3.random_element(b));

    Field f5(5);
    Rng r(7);
    std::set<FieldElement> seen;
    for (int i = 0; i < 200; ++i) seen.insert(f5.random_element(r));
    CHECK(seen.size() == 5);

    Field f2(2);
    Rng r2(11);
    int ones = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) ones += f2.random_element(r2);
    const double freq = static_cast<double>(ones) / n;
    const double sigma = std::sqrt(0.25 / n);
    CHECK(std::abs(freq - 0.5) <= 3 * sigma);
}
