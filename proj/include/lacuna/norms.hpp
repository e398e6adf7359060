#pragma once

#include <cstdint>
#include <vector>

#include "lacuna/integer_set.hpp"
#include "lacuna/trig_poly.hpp"

namespace lacuna {

struct NormReport {
    enum class Method { GridQuadrature, ExactCount, MonteCarlo };

    double value = 0;
    Method method = Method::GridQuadrature;
    std::size_t grid_size = 0;
    std::size_t trials = 0;
    double error_estimate = 0;
    // method-specific extra: maximizing p for psi_parameter, etc.
    double param = 0;
};

// Grid maximum of |f| with a Bernstein-based bound on how far the true sup can
// sit above it; error_estimate is that gap bound.
NormReport sup_norm(const TrigPolynomial& f, int oversample = 4);

// (mean of |f|^q over the grid)^{1/q} with respect to normalized Lebesgue
// measure.  grid_size 0 picks a power of two automatically; even integer q
// with grid > q·degree is exact up to rounding.
NormReport lq_norm(const TrigPolynomial& f, double q, std::size_t grid_size = 0);

// ‖e_A‖_q^q for even q, counted exactly: the number of (q/2)-tuple pairs of A
// with equal sums, via repeated sparse convolution.
std::uint64_t lq_norm_exact_even(const IntegerSet& A, int q);

// ψ_A = sup_{p ≥ 2} ‖e_A‖_p / √p over the given grid (default: 2 and
// log-spaced points up to 64).  param records the maximizing p.
NormReport psi_parameter(const IntegerSet& A, std::vector<double> p_grid = {});

// Orlicz norm for Ψ(x) = e^{x²} − 1: smallest θ with grid-mean Ψ(|f|/θ) ≤ 1.
NormReport orlicz_psi2_norm(const TrigPolynomial& f, std::size_t grid_size = 0);

// E ‖Σ r_n f̂(n) e_n‖_∞ over random sign patterns (Monte Carlo).
NormReport rademacher_norm(const TrigPolynomial& f, int trials, std::uint64_t seed,
                           int oversample = 4);

struct RearrangementResult {
    std::vector<double> sorted_moduli;  // non-increasing rearrangement a*
    double functional = 0;              // sup_n φ_α^{-1}(n) · a*_n
    double fitted_c = 0;                // smallest C with a*_n ≤ C(log n)^α/n, n ≥ 3
};

// Weak Orlicz–Lorentz data for φ_α(x) = x·(log(1+x))^α.
RearrangementResult coefficient_rearrangement(const TrigPolynomial& f, double alpha);

}  // namespace lacuna
