#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace thetaforge {

// Deterministic RNG wrapper. All randomness in the library flows through
// this so that a (params, seed) pair reproduces bit-identical output on
// any platform. std::uniform_int_distribution is implementation-defined,
// so uniform sampling uses explicit rejection instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, n), unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 eng_;
};

struct FieldSpec {
    std::uint32_t q = 0;  // field order, q = p^k
    std::uint32_t p = 0;  // prime characteristic
    std::uint32_t k = 0;  // extension degree
};

// Canonical field element representative. For prime fields this is the
// residue in [0, q). For extensions it is the coefficient vector of the
// element over F_p, packed base-p (digit i = coefficient of x^i).
using FieldElement = std::uint32_t;

bool is_prime(std::uint64_t n);

// Returns true iff q = p^k for some prime p, k >= 1; fills p and k.
bool is_prime_power(std::uint64_t q, std::uint32_t* p = nullptr, std::uint32_t* k = nullptr);

// Largest prime power q with 2*q^ell <= bound. Throws if none fits.
FieldSpec largest_prime_power_with(std::uint64_t bound, std::uint32_t ell);

// Arithmetic in F_q for prime-power q <= 2^16. Prime fields use direct
// modular arithmetic; extensions use a canonical irreducible modulus
// (first monic irreducible of degree k over F_p in lexicographic
// coefficient order) with exp/log tables over a primitive element.
// Immutable after construction and safe to share across threads.
class Field {
public:
    explicit Field(std::uint32_t q);

    const FieldSpec& spec() const { return spec_; }
    std::uint32_t q() const { return spec_.q; }
    std::uint32_t p() const { return spec_.p; }
    std::uint32_t k() const { return spec_.k; }
    bool prime() const { return spec_.k == 1; }

    // Coefficients of the modulus polynomial (degree k, monic), lowest first.
    // Empty for prime fields.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    FieldElement add(FieldElement a, FieldElement b) const {
        if (prime()) {
            std::uint32_t s = a + b;
            return s >= spec_.q ? s - spec_.q : s;
        }
        return add_ext(a, b);
    }

    FieldElement neg(FieldElement a) const {
        if (prime()) return a == 0 ? 0 : spec_.q - a;
        return neg_ext(a);
    }

    FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

    FieldElement mul(FieldElement a, FieldElement b) const {
        if (prime()) return static_cast<FieldElement>((std::uint64_t)a * b % spec_.q);
        if (a == 0 || b == 0) return 0;
        std::uint32_t e = log_[a] + log_[b];
        if (e >= spec_.q - 1) e -= spec_.q - 1;
        return exp_[e];
    }

    FieldElement inv(FieldElement a) const;
    FieldElement pow(FieldElement a, std::uint64_t e) const;

    // Uniform element; deterministic given the rng state.
    FieldElement random_element(Rng& rng) const {
        return static_cast<FieldElement>(rng.below(spec_.q));
    }

private:
    FieldElement add_ext(FieldElement a, FieldElement b) const;
    FieldElement neg_ext(FieldElement a) const;
    void build_extension_tables();

    FieldSpec spec_;
    std::vector<std::uint32_t> modulus_;  // monic irreducible, degree k (k >= 2 only)
    std::vector<FieldElement> exp_;       // exp_[i] = g^i, i in [0, q-1)
    std::vector<std::uint32_t> log_;      // log_[x] for x != 0
};

}  // namespace thetaforge
