#pragma once

#include <cstdint>

#include "lacuna/integer_set.hpp"
#include "lacuna/trig_poly.hpp"

namespace lacuna {

// de la Vallée-Poussin kernel: V̂(k) = 1 for |k| <= M, 2 − |k|/M for
// M < |k| <= 2M, 0 beyond; ‖V‖₁ <= 3.
TrigPolynomial vallee_poussin(std::int64_t M);

struct RieszResult {
    TrigPolynomial product;
    // ℓ¹ mass that support truncation may have dropped; 0 in exact mode
    double l1_tail_bound = 0;
};

// R = Π_{k∈B}(1 + cos(kt)), coefficients computed exactly in the sparse
// domain.  Quasi-independence of B is certified by R̂(0) = 1: any relation in
// B contributes extra dyadic mass at frequency 0 (InvalidInput if detected,
// exact in binary arithmetic).  support_cap > 0 truncates expansion terms to
// supports of at most that many elements and reports the dropped ℓ¹ mass;
// truncation skips the certificate.
RieszResult riesz_product(const IntegerSet& B, std::size_t support_cap = 0);

struct PseudoComplementResult {
    TrigPolynomial mu;       // μ = 2(δ₀ − V_M) ∗ R, a polynomial
    bool lower_ok = false;   // |μ̂| >= 1 on B
    bool vanish_ok = false;  // μ̂ = 0 on Λ∖B
    bool l1_ok = false;      // ‖μ‖₁ <= 8 by quadrature
    double l1_norm = 0;

    bool valid() const { return lower_ok && vanish_ok && l1_ok; }
    // throws VerificationFailed naming the first failing check
    void require_valid() const;
};

// Candidate pseudo-complement of B inside Λ at cutoff M.  Requires
// min(B) > 2M and B quasi-independent; the three defining checks are
// evaluated with tolerance 1e-6 and reported, not assumed.
PseudoComplementResult pseudo_complement(const IntegerSet& B, const IntegerSet& Lambda,
                                         std::int64_t M);

}  // namespace lacuna
