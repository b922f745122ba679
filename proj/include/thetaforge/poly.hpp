#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thetaforge/field.hpp"

namespace thetaforge {

// Default cap on dense coefficient storage. The default degree at large
// path lengths is infeasible, so pipelines refuse to allocate past this
// unless the caller raises the cap explicitly.
inline constexpr std::size_t kDefaultCoeffCap = std::size_t{1} << 28;

// All exponent tuples (a_1..a_s) with sum <= d, in graded-lexicographic
// order. The ordering is a fixed total order, so coefficient indices are
// stable across runs and machines.
struct MonomialBasis {
    std::uint32_t s = 0;
    std::uint32_t d = 0;
    std::vector<std::vector<std::uint8_t>> exponents;

    std::size_t size() const { return exponents.size(); }
};

std::shared_ptr<const MonomialBasis> enumerate_monomials(std::uint32_t s, std::uint32_t d,
                                                         std::size_t coeff_cap = kDefaultCoeffCap);

// binomial(s + d, s) as the expected basis size; throws on 64-bit overflow.
std::uint64_t monomial_count(std::uint32_t s, std::uint32_t d);

struct Polynomial {
    std::shared_ptr<const MonomialBasis> basis;
    std::vector<FieldElement> coeffs;  // one per basis monomial, graded-lex position
};

// Each coefficient i.i.d. uniform over F_q.
Polynomial sample_polynomial(std::shared_ptr<const MonomialBasis> basis, const Field& field, Rng& rng);

// Horner-free evaluation: per-coordinate power tables x_i^0..x_i^d, then
// one multiply-accumulate pass over the basis.
FieldElement evaluate(const Polynomial& f, const Field& field, std::span<const FieldElement> point);

// The ell-1 random polynomials in 2*ell variables that define a random
// algebraic graph, together with the provenance needed to regenerate it.
struct PolynomialSystem {
    std::uint32_t ell = 0;
    std::uint32_t q = 0;
    std::uint32_t d_poly = 0;
    std::uint64_t seed = 0;
    std::shared_ptr<const MonomialBasis> basis;  // s = 2*ell
    std::vector<Polynomial> polys;               // ell - 1 of them
};

PolynomialSystem sample_system(std::uint32_t ell, const Field& field, std::uint32_t d_poly,
                               std::uint64_t seed, std::size_t coeff_cap = kDefaultCoeffCap);

// True iff every polynomial vanishes at the concatenated point (u, v).
// Short-circuits on the first nonzero value.
bool evaluate_system(const PolynomialSystem& sys, const Field& field,
                     std::span<const FieldElement> u, std::span<const FieldElement> v);

// Versioned JSON sidecar so a graph can be regenerated exactly.
std::string system_to_json(const PolynomialSystem& sys);
PolynomialSystem system_from_json(const std::string& text);

}  // namespace thetaforge
