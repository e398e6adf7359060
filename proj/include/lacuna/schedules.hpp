#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lacuna/integer_set.hpp"

namespace lacuna {

// ---------------------------------------------------------------------------
// Selector mean schedules δ_k.
//
// One variant per construction.  Formula indices below the variant's domain
// (loglog needs k >= 3, the denser schedules start at k >= 4) clamp to the
// first valid index, so δ is defined everywhere; values are clipped to [0,1].
// ---------------------------------------------------------------------------
class MeanSchedule {
public:
    enum class Variant { T2_2, P2_4, T2_5, T2_6, T2_7, T2_10, KatzMall, Custom };

    // δ_k = c·loglog k / k
    static MeanSchedule t2_2(double c);
    // same means as t2_2; kept as its own tag because the block schedule differs
    static MeanSchedule p2_4(double c);
    // δ_k = c·(log k)^α / (k·(loglog k)^{α+1}),  α = 2(p−1)/(2−p)
    static MeanSchedule t2_5(double c, double p);
    // δ_k = c·(log k)^α·loglog k / k
    static MeanSchedule t2_6(double c, double p);
    // δ_k = c·n/2^n on I_n = [2^n, 2^{n+1});  τ is the second-stage selector mean
    static MeanSchedule t2_7(double c, double tau);
    // t2_5 formula with α >= 1; β controls the matching block schedule
    static MeanSchedule t2_10(double c, double p, std::optional<double> beta = {});
    // δ_k = c/k  (bounded k·δ_k: the Sidon regime)
    static MeanSchedule katz_mall(double c);
    static MeanSchedule custom(std::vector<double> table);

    Variant variant() const { return variant_; }
    double c() const { return c_; }
    double p() const { return p_; }
    double tau() const { return tau_; }
    // α = 2(p−1)/(2−p); only meaningful for T2_5/T2_6/T2_10
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    // true unless KatzMall or Custom: k·δ_k → ∞
    bool k_delta_diverges() const;

    // δ_k, clipped to [0,1].
    double mean_at(std::int64_t k) const;

    // σ_N = δ_1 + … + δ_N (compensated summation).
    double sigma(std::int64_t N) const;

    // Formula evaluated at real t >= 1 (clamped like mean_at); used by the
    // integral tails of the analytic bounds.  Custom tables are stepwise.
    double mean_continuous(double t) const;

    std::string tag() const;

private:
    Variant variant_;
    double c_ = 0, p_ = 0, tau_ = 0, alpha_ = 0, beta_ = 0;
    std::vector<double> table_;
};

// ---------------------------------------------------------------------------
// Block boundary rules n ↦ M_n.
// ---------------------------------------------------------------------------
class BlockSchedule {
public:
    enum class Variant { NPowN, ExpLogLogSq, NPowBetaN, Dyadic };

    static BlockSchedule n_pow_n() { return BlockSchedule{Variant::NPowN, 0}; }
    static BlockSchedule exp_loglog_sq() { return BlockSchedule{Variant::ExpLogLogSq, 0}; }
    static BlockSchedule n_pow_beta_n(double beta) { return BlockSchedule{Variant::NPowBetaN, beta}; }
    static BlockSchedule dyadic() { return BlockSchedule{Variant::Dyadic, 0}; }

    Variant variant() const { return variant_; }
    double beta() const { return beta_; }

    // M_n; throws OverflowError past 64 bits.
    std::int64_t boundary(std::int64_t n) const;

    // Smallest n for which boundaries are defined ([M_n, M_{n+1}) partitions
    // [M_first, ...)).  Dyadic starts at 0 so the blocks cover 1.
    std::int64_t first_index() const { return variant_ == Variant::Dyadic ? 0 : 1; }

    // Index beyond which M_n is strictly increasing with M_{n+1}/M_n >= 2.
    std::int64_t regular_from() const;

    std::string tag() const;

private:
    BlockSchedule(Variant v, double beta) : variant_(v), beta_(beta) {}
    Variant variant_;
    double beta_;
};

std::int64_t block_boundary(const BlockSchedule& s, std::int64_t n);

// ---------------------------------------------------------------------------
// Prescribed base sequences λ_1 < λ_2 < …
// ---------------------------------------------------------------------------
class BaseSequence {
public:
    enum class Variant { Naturals, PerfectPowers, Primes, Custom };

    static BaseSequence naturals() { return BaseSequence{Variant::Naturals, 1, {}}; }
    static BaseSequence perfect_powers(int d);
    static BaseSequence primes() { return BaseSequence{Variant::Primes, 0, {}}; }
    static BaseSequence custom(std::vector<std::int64_t> sorted);

    Variant variant() const { return variant_; }
    int power() const { return d_; }

    // λ_n (1-based); throws OverflowError when the value exceeds 64 bits.
    std::int64_t element(std::int64_t n) const;

    // {λ_1, …, λ_N}.
    IntegerSet first(std::int64_t N) const;

    // ν([lo, hi)) = number of base elements in [lo, hi).
    std::int64_t counting_nu(std::int64_t lo, std::int64_t hi) const;

    std::string tag() const;

private:
    BaseSequence(Variant v, int d, std::vector<std::int64_t> t)
        : variant_(v), d_(d), table_(std::move(t)) {}
    Variant variant_;
    int d_;
    std::vector<std::int64_t> table_;
};

// Random set Λ(ω) = {λ_j : ε_j(ω) = 1} with P(ε_j = 1) = δ_j.  The per-index
// uniform is addressed by (seed, j), so two schedules sampled with the same
// seed share their uniforms: pointwise smaller means give a subset (coupling).
IntegerSet sample_set(const MeanSchedule& schedule, const BaseSequence& base,
                      std::int64_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Regularity diagnostics for a prescribed base.
// ---------------------------------------------------------------------------
struct RegularityRow {
    std::int64_t N;
    double ratio_count_over_phi;   // ν([N,2N)) / φ(N)
    double ratio_phi_doubling;     // φ(2N) / φ(N)
};

struct RegularityReport {
    std::vector<RegularityRow> rows;
    double fitted_a = 0;           // ν([1,k]) ≈ a·k^d
    double fitted_d = 0;
    double fit_residual = 0;
    bool doubling_holds = true;    // λ_{8n} >= 2·λ_n for all scanned n
    std::int64_t doubling_first_failure = 0;
    double max_deviation = 0;      // max |ratio_count_over_phi − 1|
};

RegularityReport regularity_report(const BaseSequence& base,
                                   const std::function<double(double)>& phi,
                                   const std::vector<std::int64_t>& grid);

}  // namespace lacuna
