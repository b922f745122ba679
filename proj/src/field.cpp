#include "thetaforge/field.hpp"

#include <algorithm>

namespace thetaforge {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool is_prime_power(std::uint64_t q, std::uint32_t* p_out, std::uint32_t* k_out) {
    if (q < 2) return false;
    std::uint64_t p = q;
    for (std::uint64_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) {
            p = d;
            break;
        }
    }
    std::uint32_t k = 0;
    std::uint64_t m = q;
    while (m % p == 0) {
        m /= p;
        ++k;
    }
    if (m != 1) return false;
    if (p_out) *p_out = static_cast<std::uint32_t>(p);
    if (k_out) *k_out = k;
    return true;
}

namespace {

// q^ell, saturating instead of overflowing.
std::uint64_t pow_sat(std::uint64_t q, std::uint32_t ell) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < ell; ++i) {
        if (r > UINT64_MAX / q) return UINT64_MAX;
        r *= q;
    }
    return r;
}

}  // namespace

FieldSpec largest_prime_power_with(std::uint64_t bound, std::uint32_t ell) {
    if (ell == 0) throw std::invalid_argument("largest_prime_power_with: ell must be positive");
    FieldSpec best;
    for (std::uint64_t q = 2;; ++q) {
        std::uint64_t v = pow_sat(q, ell);
        if (v == UINT64_MAX || v > (bound) / 2) break;
        std::uint32_t p, k;
        if (is_prime_power(q, &p, &k)) best = {static_cast<std::uint32_t>(q), p, k};
    }
    if (best.q == 0)
        throw std::invalid_argument("largest_prime_power_with: no prime power q satisfies 2*q^ell <= bound");
    return best;
}

namespace {

// Polynomials over F_p as coefficient vectors, lowest degree first.
using PolyFp = std::vector<std::uint32_t>;

void trim(PolyFp& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyFp mul_mod(const PolyFp& a, const PolyFp& b, const PolyFp& modulus, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    PolyFp r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + (std::uint64_t)a[i] * b[j]) % p);
    // reduce by the monic modulus
    const std::size_t deg = modulus.size() - 1;
    for (std::size_t i = r.size(); i-- > deg;) {
        std::uint32_t c = r[i];
        if (c == 0) continue;
        r[i] = 0;
        for (std::size_t j = 0; j < deg; ++j) {
            std::uint64_t sub = (std::uint64_t)c * modulus[j] % p;
            r[i - deg + j] = static_cast<std::uint32_t>((r[i - deg + j] + p - sub) % p);
        }
    }
    r.resize(deg);
    return r;
}

// Plain polynomial division remainder (divisor monic), for irreducibility
// testing by trial division.
PolyFp rem(PolyFp a, const PolyFp& b, std::uint32_t p) {
    trim(a);
    const std::size_t deg = b.size() - 1;
    while (a.size() > deg) {
        std::uint32_t c = a.back();
        if (c != 0) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                std::uint64_t sub = (std::uint64_t)c * b[j] % p;
                std::size_t idx = a.size() - b.size() + j;
                a[idx] = static_cast<std::uint32_t>((a[idx] + p - sub) % p);
            }
        }
        a.pop_back();
        trim(a);
        if (a.empty()) break;
    }
    return a;
}

bool is_irreducible(const PolyFp& f, std::uint32_t p) {
    const std::size_t k = f.size() - 1;
    // trial division by every monic polynomial of degree 1..k/2
    for (std::size_t d = 1; d <= k / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            PolyFp g(d + 1, 0);
            std::uint64_t c = code;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            g[d] = 1;
            if (rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

// First monic irreducible of degree k over F_p in lexicographic order of
// the low coefficient vector. Fixed function of (p, k), so the modulus is
// identical across machines and runs.
PolyFp canonical_irreducible(std::uint32_t p, std::uint32_t k) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k; ++i) count *= p;
    for (std::uint64_t code = 1; code < count; ++code) {
        PolyFp f(k + 1, 0);
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < k; ++i) {
            f[i] = static_cast<std::uint32_t>(c % p);
            c /= p;
        }
        f[k] = 1;
        if (f[0] != 0 && is_irreducible(f, p)) return f;
    }
    throw std::logic_error("canonical_irreducible: none found");
}

std::uint32_t pack(const PolyFp& a, std::uint32_t p, std::uint32_t k) {
    std::uint32_t v = 0;
    for (std::uint32_t i = k; i-- > 0;) v = v * p + (i < a.size() ? a[i] : 0);
    return v;
}

PolyFp unpack(std::uint32_t v, std::uint32_t p, std::uint32_t k) {
    PolyFp a(k, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
        a[i] = v % p;
        v /= p;
    }
    return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> fs;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

}  // namespace

Field::Field(std::uint32_t q) {
    std::uint32_t p, k;
    if (!is_prime_power(q, &p, &k)) throw std::invalid_argument("Field: order is not a prime power");
    if (q > (1u << 16)) throw std::invalid_argument("Field: orders above 2^16 are not supported");
    spec_ = {q, p, k};
    if (k >= 2) build_extension_tables();
}

void Field::build_extension_tables() {
    const std::uint32_t q = spec_.q, p = spec_.p, k = spec_.k;
    modulus_ = canonical_irreducible(p, k);

    const auto factors = prime_factors(q - 1);
    auto pow_poly = [&](const PolyFp& base, std::uint64_t e) {
        PolyFp r = {1};
        PolyFp b = base;
        while (e) {
            if (e & 1) r = mul_mod(r, b, modulus_, p);
            b = mul_mod(b, b, modulus_, p);
            e >>= 1;
        }
        return r;
    };
    auto is_one = [](const PolyFp& a) {
        if (a.empty() || a[0] != 1) return false;
        for (std::size_t i = 1; i < a.size(); ++i)
            if (a[i] != 0) return false;
        return true;
    };

    // Smallest primitive element in packed order.
    PolyFp gen;
    for (std::uint32_t code = 2; code < q; ++code) {
        PolyFp g = unpack(code, p, k);
        bool primitive = true;
        for (std::uint64_t r : factors) {
            if (is_one(pow_poly(g, (q - 1) / r))) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            gen = g;
            break;
        }
    }
    if (gen.empty()) throw std::logic_error("Field: no primitive element found");

    exp_.assign(q - 1, 0);
    log_.assign(q, 0);
    PolyFp cur = {1};
    for (std::uint32_t i = 0; i < q - 1; ++i) {
        std::uint32_t code = pack(cur, p, k);
        exp_[i] = code;
        log_[code] = i;
        cur = mul_mod(cur, gen, modulus_, p);
    }
}

FieldElement Field::add_ext(FieldElement a, FieldElement b) const {
    const std::uint32_t p = spec_.p;
    std::uint32_t r = 0, mult = 1;
    for (std::uint32_t i = 0; i < spec_.k; ++i) {
        std::uint32_t da = a % p, db = b % p;
        a /= p;
        b /= p;
        std::uint32_t s = da + db;
        if (s >= p) s -= p;
        r += s * mult;
        mult *= p;
    }
    return r;
}

FieldElement Field::neg_ext(FieldElement a) const {
    const std::uint32_t p = spec_.p;
    std::uint32_t r = 0, mult = 1;
    for (std::uint32_t i = 0; i < spec_.k; ++i) {
        std::uint32_t da = a % p;
        a /= p;
        r += (da == 0 ? 0 : p - da) * mult;
        mult *= p;
    }
    return r;
}

FieldElement Field::inv(FieldElement a) const {
    if (a == 0) throw std::domain_error("Field::inv: zero has no inverse");
    if (prime()) return pow(a, spec_.q - 2);
    std::uint32_t e = log_[a];
    return e == 0 ? 1 : exp_[spec_.q - 1 - e];
}

FieldElement Field::pow(FieldElement a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (!prime()) {
        std::uint64_t le = (std::uint64_t)log_[a] * (e % (spec_.q - 1)) % (spec_.q - 1);
        return exp_[le];
    }
    FieldElement r = 1, b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

}  // namespace thetaforge
