#include "thetaforge/poly.hpp"

#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace thetaforge {

std::uint64_t monomial_count(std::uint32_t s, std::uint32_t d) {
    // binomial(s + d, s) with overflow checks
    std::uint64_t r = 1;
    for (std::uint32_t i = 1; i <= s; ++i) {
        std::uint64_t num = d + i;
        if (r > UINT64_MAX / num) throw std::overflow_error("monomial_count: overflow");
        r = r * num / i;  // exact: product of i consecutive integers divisible by i!
    }
    return r;
}

std::shared_ptr<const MonomialBasis> enumerate_monomials(std::uint32_t s, std::uint32_t d,
                                                         std::size_t coeff_cap) {
    if (s < 1) throw std::invalid_argument("enumerate_monomials: s must be >= 1");
    const std::uint64_t expected = monomial_count(s, d);
    if (expected > coeff_cap)
        throw std::length_error("enumerate_monomials: basis size " + std::to_string(expected) +
                                " exceeds coefficient cap " + std::to_string(coeff_cap));

    auto basis = std::make_shared<MonomialBasis>();
    basis->s = s;
    basis->d = d;
    basis->exponents.reserve(expected);

    // Graded: total degree 0, 1, ..., d. Within a grade: lexicographic,
    // first variable most significant.
    std::vector<std::uint8_t> exps(s, 0);
    for (std::uint32_t total = 0; total <= d; ++total) {
        // enumerate compositions of `total` into s parts, lex descending on a_1
        std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t pos, std::uint32_t left) {
            if (pos == s - 1) {
                exps[pos] = static_cast<std::uint8_t>(left);
                basis->exponents.push_back(exps);
                return;
            }
            for (std::uint32_t a = left + 1; a-- > 0;) {
                exps[pos] = static_cast<std::uint8_t>(a);
                rec(pos + 1, left - a);
            }
        };
        rec(0, total);
    }
    return basis;
}

Polynomial sample_polynomial(std::shared_ptr<const MonomialBasis> basis, const Field& field, Rng& rng) {
    Polynomial f;
    f.basis = std::move(basis);
    f.coeffs.resize(f.basis->size());
    for (auto& c : f.coeffs) c = field.random_element(rng);
    return f;
}

FieldElement evaluate(const Polynomial& f, const Field& field, std::span<const FieldElement> point) {
    const MonomialBasis& b = *f.basis;
    if (point.size() != b.s) throw std::invalid_argument("evaluate: point dimension mismatch");

    // power tables x_i^0 .. x_i^d
    std::vector<FieldElement> powers((std::size_t)b.s * (b.d + 1));
    for (std::uint32_t i = 0; i < b.s; ++i) {
        FieldElement* row = &powers[(std::size_t)i * (b.d + 1)];
        row[0] = 1;
        for (std::uint32_t e = 1; e <= b.d; ++e) row[e] = field.mul(row[e - 1], point[i]);
    }

    FieldElement acc = 0;
    for (std::size_t m = 0; m < b.size(); ++m) {
        FieldElement c = f.coeffs[m];
        if (c == 0) continue;
        FieldElement term = c;
        const auto& exps = b.exponents[m];
        for (std::uint32_t i = 0; i < b.s; ++i) {
            if (exps[i]) term = field.mul(term, powers[(std::size_t)i * (b.d + 1) + exps[i]]);
        }
        acc = field.add(acc, term);
    }
    return acc;
}

PolynomialSystem sample_system(std::uint32_t ell, const Field& field, std::uint32_t d_poly,
                               std::uint64_t seed, std::size_t coeff_cap) {
    if (ell < 2) throw std::invalid_argument("sample_system: ell must be >= 2");
    PolynomialSystem sys;
    sys.ell = ell;
    sys.q = field.q();
    sys.d_poly = d_poly;
    sys.seed = seed;
    sys.basis = enumerate_monomials(2 * ell, d_poly, coeff_cap);
    Rng rng(seed);
    sys.polys.reserve(ell - 1);
    for (std::uint32_t i = 0; i + 1 < ell; ++i) sys.polys.push_back(sample_polynomial(sys.basis, field, rng));
    return sys;
}

bool evaluate_system(const PolynomialSystem& sys, const Field& field,
                     std::span<const FieldElement> u, std::span<const FieldElement> v) {
    if (u.size() != sys.ell || v.size() != sys.ell)
        throw std::invalid_argument("evaluate_system: point dimension mismatch");
    std::vector<FieldElement> point(u.begin(), u.end());
    point.insert(point.end(), v.begin(), v.end());
    for (const auto& f : sys.polys) {
        if (evaluate(f, field, point) != 0) return false;
    }
    return true;
}

std::string system_to_json(const PolynomialSystem& sys) {
    nlohmann::json j;
    j["format"] = "thetaforge-polysystem";
    j["version"] = 1;
    j["ell"] = sys.ell;
    j["q"] = sys.q;
    j["s"] = 2 * sys.ell;
    j["d_poly"] = sys.d_poly;
    j["seed"] = sys.seed;
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& f : sys.polys) coeffs.push_back(f.coeffs);
    j["coeffs"] = std::move(coeffs);
    return j.dump(2);
}

PolynomialSystem system_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format") != "thetaforge-polysystem" || j.at("version") != 1)
        throw std::runtime_error("system_from_json: unrecognized sidecar format");
    PolynomialSystem sys;
    sys.ell = j.at("ell").get<std::uint32_t>();
    sys.q = j.at("q").get<std::uint32_t>();
    sys.d_poly = j.at("d_poly").get<std::uint32_t>();
    sys.seed = j.at("seed").get<std::uint64_t>();
    sys.basis = enumerate_monomials(2 * sys.ell, sys.d_poly);
    for (const auto& c : j.at("coeffs")) {
        Polynomial f;
        f.basis = sys.basis;
        f.coeffs = c.get<std::vector<FieldElement>>();
        if (f.coeffs.size() != sys.basis->size())
            throw std::runtime_error("system_from_json: coefficient count mismatch");
        sys.polys.push_back(std::move(f));
    }
    if (sys.polys.size() != sys.ell - 1)
        throw std::runtime_error("system_from_json: polynomial count mismatch");
    return sys;
}

}  // namespace thetaforge
