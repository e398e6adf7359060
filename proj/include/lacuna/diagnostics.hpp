#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "lacuna/integer_set.hpp"
#include "lacuna/schedules.hpp"
#include "lacuna/trig_poly.hpp"

namespace lacuna {

// ---------------------------------------------------------------------------
// Probability-bound checks: empirical frequency vs analytic bound.
// ---------------------------------------------------------------------------
struct BoundCheckResult {
    enum class Verdict { Consistent, Violated, Inconclusive };

    std::string bound_id;
    std::string parameters;
    double analytic_bound = 0;
    double empirical_estimate = 0;
    std::size_t trials = 0;
    double std_error = 0;
    Verdict verdict = Verdict::Consistent;
    std::string note;

    // violated only when the empirical estimate clears the bound by more than
    // three standard errors
    static Verdict judge(double empirical, double std_error, double analytic);
};

std::string to_string(BoundCheckResult::Verdict v);

// P(|Σ(ε_k − δ_k)| >= a) against 4·exp(−a²/8σ), σ = Σδ_k(1−δ_k).
BoundCheckResult check_deviation_bound(const std::vector<double>& delta, double a,
                                       std::size_t trials, std::uint64_t seed);

// P(sampled set ∩ [M, ∞) contains a relation of length s) against
// (C^s/s^s)·Σ_{j: λ_j >= M} δ_j²σ_j^{s−2}, summed exactly up to tail_cap and
// completed by an integral remainder.  constant is 4e (natural base) or 16e
// (prescribed-base variant).
BoundCheckResult check_relation_bound(const MeanSchedule& schedule, const BaseSequence& base,
                                      int s, std::int64_t M, std::size_t trials,
                                      std::uint64_t seed, std::int64_t horizon = 10000,
                                      std::int64_t tail_cap = 1000000,
                                      double constant = 4 * 2.718281828459045);

// Two results per block index n (count bands, relation window above
// l_n = [144c²τ²n]); a single inconclusive report when the parameters put
// every l_n at zero inside the range.
std::vector<BoundCheckResult> check_dyadic_block_bound(double c, double tau, int n_lo, int n_hi,
                                                       std::size_t trials, std::uint64_t seed,
                                                       int probe_width = 2);

// P(‖Σ_{k<=N}(ε_k − δ_k) e_{λ_k}‖_∞ > 15√(σ_N log λ_N)) on the 2λ_N-th-roots
// grid, against 8/N²; requires σ_N >= 25·log λ_N.
BoundCheckResult check_grid_deviation_bound(const BaseSequence& base,
                                            const MeanSchedule& schedule, std::int64_t N,
                                            std::size_t trials, std::uint64_t seed);

// Σ_{j>M} δ_j²σ_j^{s−2} restricted to indices with λ_j >= M; shared by the
// relation-bound check and the default-c computation.
double relation_tail_sum(const MeanSchedule& schedule, const BaseSequence& base, int s,
                         std::int64_t M, std::int64_t tail_cap = 1000000);

// Largest c <= 1 for which Σ_{n>=3} (4e)^n/n^n · Σ_{j>M_n} δ_j²σ_j^{n−2} < 1
// under δ_k = c·loglog k/k with M_n = n^n; the feasibility rule behind the
// schedule's free constant.
double default_schedule_c(int n_max = 10);

// ---------------------------------------------------------------------------
// Weyl averages A_N(t) = (1/|Λ_N|) Σ_{n∈Λ_N} e_n(t), Λ_N = Λ∩[1,N].
// ---------------------------------------------------------------------------
struct AngleSample {
    double t = 0;
    std::string tag;  // zero / rational(p/q) / irrational-proxy
};

struct WeylProfile {
    enum class Class { ConvergesToZero, ConvergesToLimit, Undecided };

    struct Row {
        AngleSample angle;
        std::vector<std::complex<double>> values;  // A_N per grid entry
        Class cls = Class::Undecided;
        std::complex<double> limit = 0;
    };

    std::vector<std::int64_t> N_grid;
    std::vector<Row> rows;
};

WeylProfile weyl_profile(const IntegerSet& set, const std::vector<AngleSample>& t_samples,
                         const std::vector<std::int64_t>& N_grid, double tol = 0.05);

// Irrational-proxy angles 2π·frac(j·(√5−1)/2), j = 1..count.
std::vector<AngleSample> golden_angles(int count);

// ---------------------------------------------------------------------------
// Growth/functional profiles.
// ---------------------------------------------------------------------------
struct MeshFit {
    double beta = 0;      // |Λ∩[1,N]| ≈ C·(log N)^β
    double constant = 0;
    double residual = 0;
    bool rejected = false;
};

MeshFit mesh_exponent_fit(const IntegerSet& set, const std::vector<std::int64_t>& N_grid,
                          double residual_threshold = 0.1);

struct LambdaQProfile {
    std::vector<double> q_grid;
    std::vector<double> cq;  // lower bounds on C_q
    double fitted_exponent = 0;
    double fit_residual = 0;
};

// Lower bounds on C_q = sup ‖f‖_q/‖f‖₂ over Λ-polynomials, maximized over
// structured and random coefficient draws with a sign-improvement pass.
LambdaQProfile lambda_q_profile(const IntegerSet& set, std::vector<double> q_grid,
                                std::size_t trials, std::uint64_t seed);

// Lower estimate of the uniform-convergence constant sup ‖S_N f‖_∞/‖f‖_∞.
double uc_lower_bound(const std::vector<std::int64_t>& freqs,
                      const std::vector<std::int64_t>& N_grid, std::size_t trials,
                      std::uint64_t seed);
double uc_lower_bound(const IntegerSet& set, const std::vector<std::int64_t>& N_grid,
                      std::size_t trials, std::uint64_t seed);

struct RiderEstimate {
    double value = 0;
    TrigPolynomial witness;
};

// Lower estimate of sup ‖f̂‖_p / E‖Σ r_n f̂(n) e_n‖_∞ over Λ-polynomials.
RiderEstimate rider_ratio(const IntegerSet& set, double p, std::size_t trials,
                          std::uint64_t seed);

struct ZalcwasserRow {
    double q = 0;
    double exponent = 0;
    double residual = 0;
};

// Fitted growth exponent of ‖Σ_{n<=N} e_{n²}‖_q in N (expected 1 − 2/q).
std::vector<ZalcwasserRow> zalcwasser_fit(const std::vector<std::int64_t>& N_grid,
                                          const std::vector<double>& q_grid);

}  // namespace lacuna
