#include "lacuna/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "lacuna/errors.hpp"
#include "lacuna/norms.hpp"

namespace lacuna {
namespace {

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    double r = 1;
    for (std::size_t i = 0; i < k; ++i) r *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

}  // namespace

TrigPolynomial vallee_poussin(std::int64_t M) {
    if (M < 1) throw InvalidInput("vallee_poussin: M must be >= 1");
    TrigPolynomial V;
    for (std::int64_t k = -2 * M; k <= 2 * M; ++k) {
        std::int64_t a = std::abs(k);
        double c = a <= M ? 1.0 : 2.0 - static_cast<double>(a) / static_cast<double>(M);
        V.set_coeff(k, c);
    }
    return V;
}

RieszResult riesz_product(const IntegerSet& B, std::size_t support_cap) {
    RieszResult res;
    bool exact = support_cap == 0 || support_cap >= B.size();

    if (exact) {
        TrigPolynomial R = TrigPolynomial::constant(1.0);
        for (std::int64_t k : B) {
            TrigPolynomial factor = TrigPolynomial::constant(1.0);
            factor.set_coeff(k, 0.5);
            factor.set_coeff(-k, 0.5);
            R = R * factor;
        }
        // every coefficient is a dyadic rational, so this comparison is exact:
        // R̂(0) > 1 iff some signed subset of B sums to zero
        if (R.coeff(0) != 1.0)
            throw InvalidInput("riesz_product: relation detected in B (mass at frequency 0)");
        res.product = std::move(R);
        return res;
    }

    // layered by support size so truncation is well-defined after merging
    std::vector<TrigPolynomial> layer(support_cap + 1);
    layer[0] = TrigPolynomial::constant(1.0);
    for (std::int64_t k : B) {
        for (std::size_t j = support_cap; j >= 1; --j) {
            TrigPolynomial shifted;
            for (const auto& [n, c] : layer[j - 1].coeffs()) {
                shifted.set_coeff(n + k, shifted.coeff(n + k) + 0.5 * c);
                shifted.set_coeff(n - k, shifted.coeff(n - k) + 0.5 * c);
            }
            layer[j] += shifted;
        }
    }
    for (const auto& l : layer) res.product += l;
    // each dropped support contributes total ℓ¹ mass 2^{|S|}·2^{-|S|} = 1
    for (std::size_t j = support_cap + 1; j <= B.size(); ++j)
        res.l1_tail_bound += binomial(B.size(), j);
    return res;
}

void PseudoComplementResult::require_valid() const {
    if (!lower_ok) throw VerificationFailed("pseudo-complement: |mu-hat| < 1 somewhere on B");
    if (!vanish_ok)
        throw VerificationFailed("pseudo-complement: mu-hat nonzero on Lambda minus B");
    if (!l1_ok) throw VerificationFailed("pseudo-complement: L1 norm exceeds 8");
}

PseudoComplementResult pseudo_complement(const IntegerSet& B, const IntegerSet& Lambda,
                                         std::int64_t M) {
    if (M < 1) throw InvalidInput("pseudo_complement: M must be >= 1");
    if (B.empty()) throw InvalidInput("pseudo_complement: B must be nonempty");
    if (B.min() <= 2 * M) throw InvalidInput("pseudo_complement: needs min(B) > 2M");
    for (std::int64_t b : B)
        if (!Lambda.contains(b)) throw InvalidInput("pseudo_complement: B must lie inside Lambda");

    TrigPolynomial R = riesz_product(B).product;  // certifies quasi-independence
    TrigPolynomial V = vallee_poussin(M);
    // convolving the measure 2(δ₀ − V) with R multiplies coefficients
    TrigPolynomial mu;
    for (const auto& [n, c] : R.coeffs())
        mu.set_coeff(n, 2.0 * (1.0 - V.coeff(n)) * c);

    PseudoComplementResult res;
    const double tol = 1e-6;
    res.lower_ok = true;
    for (std::int64_t b : B)
        if (std::abs(mu.coeff(b)) < 1.0 - tol) res.lower_ok = false;
    res.vanish_ok = true;
    for (std::int64_t l : Lambda)
        if (!B.contains(l) && std::abs(mu.coeff(l)) > tol) res.vanish_ok = false;
    res.l1_norm = lq_norm(mu, 1.0).value;
    res.l1_ok = res.l1_norm <= 8.0 + tol;
    res.mu = std::move(mu);
    return res;
}

}  // namespace lacuna
