#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "thetaforge/poly.hpp"

using namespace thetaforge;

TEST_CASE("monomial enumeration: counts and contents") {
    auto b = enumerate_monomials(2, 2);
    REQUIRE(b->size() == 6);
    // oracle: exhaustive set of exponent pairs with sum <= 2
    std::set<std::vector<std::uint8_t>> expected = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    std::set<std::vector<std::uint8_t>> got(b->exponents.begin(), b->exponents.end());
    CHECK(got == expected);

    auto constants = enumerate_monomials(1, 0);
    REQUIRE(constants->size() == 1);
    CHECK(constants->exponents[0] == std::vector<std::uint8_t>{0});

    CHECK(monomial_count(6, 18) == 134596);  // binomial(24, 6)
    auto big = enumerate_monomials(6, 18);
    CHECK(big->size() == 134596);

    // graded order: total degree never decreases
    int prev = -1;
    for (const auto& e : b->exponents) {
        int deg = 0;
        for (auto x : e) deg += x;
        CHECK(deg >= prev);
        prev = deg;
    }

    CHECK_THROWS_AS(enumerate_monomials(6, 18, 1000), std::length_error);
}

TEST_CASE("monomial count equals the binomial for a grid of (s, d)") {
    for (std::uint32_t s = 1; s <= 4; ++s) {
        for (std::uint32_t d = 0; d <= 5; ++d) {
            auto b = enumerate_monomials(s, d);
            CHECK(b->size() == monomial_count(s, d));
            std::set<std::vector<std::uint8_t>> dedup(b->exponents.begin(), b->exponents.end());
            CHECK(dedup.size() == b->size());
        }
    }
}

TEST_CASE("polynomial sampling: determinism, zero frequency, coverage") {
    Field f5(5);
    auto basis = enumerate_monomials(4, 2);

    Rng a(99), b(99);
    auto p1 = sample_polynomial(basis, f5, a);
    auto p2 = sample_polynomial(basis, f5, b);
    CHECK(p1.coeffs == p2.coeffs);

    Rng r(3);
    std::uint64_t zeros = 0, total = 0;
    for (int i = 0; i < 1000; ++i) {
        auto p = sample_polynomial(basis, f5, r);
        for (auto cv : p.coeffs) zeros += cv == 0;
        total += p.coeffs.size();
    }
    const double freq = static_cast<double>(zeros) / static_cast<double>(total);
    const double pz = 1.0 / 5.0;
    const double sigma = std::sqrt(pz * (1 - pz) / static_cast<double>(total));
    CHECK(std::abs(freq - pz) <= 3 * sigma);

    // q=2, basis of size 3 (s=1, d=2): all 8 polynomials appear
    Field f2(2);
    auto small = enumerate_monomials(1, 2);
    Rng r2(5);
    std::set<std::vector<FieldElement>> seen;
    for (int i = 0; i < 500; ++i) seen.insert(sample_polynomial(small, f2, r2).coeffs);
    CHECK(seen.size() == 8);
}

namespace {

// naive term-by-term reference evaluator
FieldElement naive_eval(const Polynomial& f, const Field& field,
                        const std::vector<FieldElement>& pt) {
    FieldElement acc = 0;
    for (std::size_t m = 0; m < f.basis->size(); ++m) {
        FieldElement term = f.coeffs[m];
        for (std::uint32_t i = 0; i < f.basis->s; ++i)
            for (std::uint8_t e = 0; e < f.basis->exponents[m][i]; ++e) term = field.mul(term, pt[i]);
        acc = field.add(acc, term);
    }
    return acc;
}

}  // namespace

TEST_CASE("evaluation against a naive reference, exhaustive for tiny fields") {
    Field f3(3);
    for (std::uint32_t s = 1; s <= 3; ++s) {
        for (std::uint32_t d = 0; d <= 2; ++d) {
            auto basis = enumerate_monomials(s, d);
            Rng r(s * 10 + d);
            auto f = sample_polynomial(basis, f3, r);
            std::vector<FieldElement> pt(s, 0);
            // iterate all q^s points
            bool done = false;
            while (!done) {
                CHECK(evaluate(f, f3, pt) == naive_eval(f, f3, pt));
                std::uint32_t i = 0;
                for (; i < s; ++i) {
                    if (++pt[i] < 3) break;
                    pt[i] = 0;
                }
                done = i == s;
            }
        }
    }
}

TEST_CASE("evaluation specifics") {
    Field f5(5);
    auto basis = enumerate_monomials(2, 2);
    Polynomial zero{basis, std::vector<FieldElement>(basis->size(), 0)};
    std::vector<FieldElement> pt = {2, 3};
    CHECK(evaluate(zero, f5, pt) == 0);

    // f = x*y: locate the (1,1) monomial
    Polynomial xy{basis, std::vector<FieldElement>(basis->size(), 0)};
    for (std::size_t m = 0; m < basis->size(); ++m)
        if (basis->exponents[m] == std::vector<std::uint8_t>{1, 1}) xy.coeffs[m] = 1;
    CHECK(evaluate(xy, f5, pt) == 1);  // 6 mod 5
}

TEST_CASE("vanishing probability is 1/q") {
    Field f7(7);
    auto basis = enumerate_monomials(3, 2);
    Rng r(17);
    const int n = 20000;
    int zeros = 0;
    for (int i = 0; i < n; ++i) {
        auto f = sample_polynomial(basis, f7, r);
        std::vector<FieldElement> pt = {f7.random_element(r), f7.random_element(r),
                                        f7.random_element(r)};
        zeros += evaluate(f, f7, pt) == 0;
    }
    const double p0 = 1.0 / 7.0;
    const double sigma = std::sqrt(p0 * (1 - p0) / n);
    CHECK(std::abs(static_cast<double>(zeros) / n - p0) <= 3 * sigma);
}

TEST_CASE("system evaluation: trivial systems and edge frequency") {
    Field f3(3);
    auto sys = sample_system(2, f3, 2, 123);
    REQUIRE(sys.polys.size() == 1);
    REQUIRE(sys.basis->s == 4);

    // all-zero system accepts every pair
    PolynomialSystem zero_sys = sys;
    for (auto& p : zero_sys.polys) std::fill(p.coeffs.begin(), p.coeffs.end(), 0);
    // constant-one system rejects every pair
    PolynomialSystem one_sys = sys;
    for (auto& p : one_sys.polys) {
        std::fill(p.coeffs.begin(), p.coeffs.end(), 0);
        p.coeffs[0] = 1;
    }
    for (FieldElement a = 0; a < 3; ++a)
        for (FieldElement b = 0; b < 3; ++b) {
            std::vector<FieldElement> u = {a, b}, v = {b, a};
            CHECK(evaluate_system(zero_sys, f3, u, v));
            CHECK_FALSE(evaluate_system(one_sys, f3, u, v));
        }

    // ell=2: edge frequency 1/q over fresh systems and all pairs
    Rng seeds(1);
    std::uint64_t edges = 0, pairs = 0;
    for (int s = 0; s < 40; ++s) {
        auto fresh = sample_system(2, f3, 8, seeds.next());
        for (std::uint32_t ui = 0; ui < 9; ++ui)
            for (std::uint32_t vi = 0; vi < 9; ++vi) {
                std::vector<FieldElement> u = {ui % 3, ui / 3}, v = {vi % 3, vi / 3};
                edges += evaluate_system(fresh, f3, u, v);
                ++pairs;
            }
    }
    const double p0 = 1.0 / 3.0;
    const double sigma = std::sqrt(p0 * (1 - p0) / static_cast<double>(pairs));
    CHECK(std::abs(static_cast<double>(edges) / static_cast<double>(pairs) - p0) <= 4 * sigma);

    CHECK_THROWS(sample_system(1, f3, 2, 1));
}

TEST_CASE("joint vanishing at m distinct points has probability q^-m") {
    for (std::uint32_t q : {5u, 7u}) {
        for (int m : {2, 3}) {
            CAPTURE(q);
            CAPTURE(m);
            Field f(q);
            auto basis = enumerate_monomials(2, static_cast<std::uint32_t>(m));  // d >= m-1
            Rng r(q * 100 + m);
            const int n = 20000;
            int hits = 0;
            for (int i = 0; i < n; ++i) {
                // m distinct points
                std::vector<std::vector<FieldElement>> pts;
                while (static_cast<int>(pts.size()) < m) {
                    std::vector<FieldElement> pt = {f.random_element(r), f.random_element(r)};
                    bool dup = false;
                    for (auto& other : pts) dup |= other == pt;
                    if (!dup) pts.push_back(pt);
                }
                auto poly = sample_polynomial(basis, f, r);
                bool all = true;
                for (auto& pt : pts) all &= evaluate(poly, f, pt) == 0;
                hits += all;
            }
            const double p0 = std::pow(static_cast<double>(q), -m);
            const double sigma = std::sqrt(p0 * (1 - p0) / n);
            CHECK(std::abs(static_cast<double>(hits) / n - p0) <= 3 * sigma);
        }
    }
}

TEST_CASE("sidecar round trip") {
    Field f5(5);
    auto sys = sample_system(3, f5, 4, 777);
    const std::string text = system_to_json(sys);
    auto back = system_from_json(text);
    CHECK(back.ell == sys.ell);
    CHECK(back.q == sys.q);
    CHECK(back.d_poly == sys.d_poly);
    CHECK(back.seed == sys.seed);
    REQUIRE(back.polys.size() == sys.polys.size());
    for (std::size_t i = 0; i < sys.polys.size(); ++i)
        CHECK(back.polys[i].coeffs == sys.polys[i].coeffs);
}
