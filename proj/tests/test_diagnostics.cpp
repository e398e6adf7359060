#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "lacuna/diagnostics.hpp"
#include "lacuna/errors.hpp"
#include "lacuna/parallel.hpp"
#include "lacuna/schedules.hpp"

using namespace lacuna;
using Verdict = BoundCheckResult::Verdict;

TEST_CASE("verdict rule") {
    CHECK(BoundCheckResult::judge(0.5, 0.01, 0.4) == Verdict::Violated);
    CHECK(BoundCheckResult::judge(0.42, 0.01, 0.4) == Verdict::Consistent);
    CHECK(BoundCheckResult::judge(0.3, 0.1, 0.4) == Verdict::Consistent);
    CHECK(to_string(Verdict::Violated) == "violated");
    CHECK(to_string(Verdict::Consistent) == "consistent");
    CHECK(to_string(Verdict::Inconclusive) == "inconclusive");
}

TEST_CASE("deviation bound at threshold zero") {
    std::vector<double> delta(20, 0.3);
    auto r = check_deviation_bound(delta, 0.0, 1000, 1);
    CHECK(r.empirical_estimate == 1.0);
    CHECK(r.analytic_bound == 4.0);
    CHECK(r.verdict == Verdict::Consistent);
    CHECK(r.bound_id == "lemma1_3");
}

TEST_CASE("deviation bound, fair coins") {
    std::vector<double> delta(100, 0.5);
    auto r = check_deviation_bound(delta, 20.0, 2000, 7);
    // sigma = 25, so the bound is 4·e^{-2}
    CHECK(r.analytic_bound == doctest::Approx(4 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(r.verdict == Verdict::Consistent);
    CHECK(r.trials == 2000);
    // the true tail P(|S| >= 20) is about 1e-4; the bound has lots of room
    CHECK(r.empirical_estimate < 0.05);
}

TEST_CASE("deviation bound rejects bad input") {
    std::vector<double> half(10, 0.5);
    CHECK_THROWS_AS(check_deviation_bound(half, 1.0, 10, 0), InvalidInput);
    CHECK_THROWS_AS(check_deviation_bound({}, 1.0, 2000, 0), InvalidInput);
    CHECK_THROWS_AS(check_deviation_bound({0.5, 1.5}, 1.0, 2000, 0), InvalidInput);
    CHECK_THROWS_AS(check_deviation_bound(std::vector<double>(10, 1.0), 1.0, 2000, 0),
                    InvalidInput);  // sigma = 0
    CHECK_THROWS_AS(check_deviation_bound(half, 100.0, 2000, 0), InvalidInput);  // a > sigma
    CHECK_THROWS_AS(check_deviation_bound(half, -1.0, 2000, 0), InvalidInput);
}

TEST_CASE("deviation bound is worker-count independent") {
    std::vector<double> delta(50, 0.4);
    set_worker_count(1);
    auto r1 = check_deviation_bound(delta, 5.0, 2000, 99);
    set_worker_count(4);
    auto r4 = check_deviation_bound(delta, 5.0, 2000, 99);
    set_worker_count(1);
    CHECK(r1.empirical_estimate == r4.empirical_estimate);
}

TEST_CASE("relation tail sum, finite custom case") {
    auto sched = MeanSchedule::custom({0.5, 0.5, 0.5, 0.5});
    auto base = BaseSequence::custom({1, 2, 3, 4});
    // s = 2: sum of delta_j^2 over lambda_j >= 2
    CHECK(relation_tail_sum(sched, base, 2, 2) == doctest::Approx(0.75).epsilon(1e-12));
    // s = 3 picks up sigma_j = 0.5j
    double expected = 0.25 * (1.0 + 1.5 + 2.0);
    CHECK(relation_tail_sum(sched, base, 3, 2) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(relation_tail_sum(sched, base, 1, 2), InvalidInput);
}

TEST_CASE("relation tail sum decreases in M and is cap-stable") {
    auto sched = MeanSchedule::t2_2(1.0);
    auto nat = BaseSequence::naturals();
    double t10 = relation_tail_sum(sched, nat, 3, 10);
    double t100 = relation_tail_sum(sched, nat, 3, 100);
    CHECK(t100 < t10);
    CHECK(t100 > 0);
    // integral remainder agrees with pushing the exact range out
    double coarse = relation_tail_sum(sched, nat, 3, 27, 100000);
    double fine = relation_tail_sum(sched, nat, 3, 27, 1000000);
    CHECK(coarse == doctest::Approx(fine).epsilon(0.02));
}

TEST_CASE("relation bound on the loglog schedule") {
    auto r = check_relation_bound(MeanSchedule::t2_2(1.0), BaseSequence::naturals(), 3, 27, 200,
                                  11, 2000);
    CHECK(r.bound_id == "lemma2_1");
    CHECK(r.verdict != Verdict::Violated);
    CHECK(r.analytic_bound > 0);
    CHECK(r.note.find("one-sided") != std::string::npos);
}

TEST_CASE("relation bound, degenerate schedule") {
    auto sched = MeanSchedule::custom(std::vector<double>(50, 0.0));
    auto r = check_relation_bound(sched, BaseSequence::naturals(), 3, 2, 50, 0, 50);
    CHECK(r.empirical_estimate == 0.0);
    CHECK(r.analytic_bound == 0.0);
    CHECK(r.verdict == Verdict::Consistent);
}

TEST_CASE("relation bound over primes uses the prescribed-base constant") {
    // three odd primes cannot cancel: odd ± odd ± odd is odd
    auto r = check_relation_bound(MeanSchedule::t2_2(1.0), BaseSequence::primes(), 3, 20, 50, 3,
                                  500, 100000, 16 * 2.718281828459045);
    CHECK(r.bound_id == "lemma3_3");
    CHECK(r.empirical_estimate == 0.0);
    CHECK(r.verdict == Verdict::Consistent);
    CHECK_THROWS_AS(
        check_relation_bound(MeanSchedule::t2_2(1.0), BaseSequence::naturals(), 1, 2, 10, 0),
        InvalidInput);
}

TEST_CASE("dyadic block bound reports the vacuous-constant regime") {
    auto res = check_dyadic_block_bound(0.1, 0.1, 3, 10, 10, 0);
    REQUIRE(res.size() == 1);
    CHECK(res[0].bound_id == "lemma2_9");
    CHECK(res[0].verdict == Verdict::Inconclusive);
    CHECK(res[0].note.find("not desk-verifiable") != std::string::npos);
}

TEST_CASE("dyadic block bound with inflated constants") {
    auto res = check_dyadic_block_bound(2.0, 1.0, 8, 12, 100, 5);
    REQUIRE(res.size() == 10);  // counts + relation per block
    for (const auto& r : res) {
        CHECK(r.bound_id == "lemma2_9");
        CHECK(r.verdict == Verdict::Consistent);
    }
    // count bands concentrate hard at these sizes
    CHECK(res[0].parameters.find("stage=counts") != std::string::npos);
    CHECK(res[1].parameters.find("stage=relation") != std::string::npos);
    CHECK(res[0].empirical_estimate <= 0.1);
}

TEST_CASE("dyadic block bound rejects bad input") {
    CHECK_THROWS_AS(check_dyadic_block_bound(3.0, 1.0, 1, 4, 10, 0), InvalidInput);  // mean > 1
    CHECK_THROWS_AS(check_dyadic_block_bound(0.0, 1.0, 3, 5, 10, 0), InvalidInput);
    CHECK_THROWS_AS(check_dyadic_block_bound(1.0, 2.0, 3, 5, 10, 0), InvalidInput);
    CHECK_THROWS_AS(check_dyadic_block_bound(1.0, 1.0, 5, 3, 10, 0), InvalidInput);
    CHECK_THROWS_AS(check_dyadic_block_bound(1.0, 1.0, 3, 30, 10, 0), ResourceExceeded);
}

TEST_CASE("grid deviation bound") {
    auto sched = MeanSchedule::custom(std::vector<double>(2048, 0.5));
    auto r = check_grid_deviation_bound(BaseSequence::naturals(), sched, 2048, 50, 5);
    CHECK(r.bound_id == "lemma3_2");
    CHECK(r.empirical_estimate == 0.0);  // threshold sits far above the typical sup
    CHECK(r.analytic_bound == doctest::Approx(8.0 / (2048.0 * 2048.0)).epsilon(1e-12));
    CHECK(r.verdict == Verdict::Consistent);
    // thin schedules miss the variance precondition at this scale
    CHECK_THROWS_AS(
        check_grid_deviation_bound(BaseSequence::naturals(), MeanSchedule::t2_2(1.0), 1000, 10, 0),
        InvalidInput);
}

TEST_CASE("default schedule constant") {
    double c5 = default_schedule_c(5);
    CHECK(c5 > 0);
    CHECK(c5 <= 1);
    CHECK(default_schedule_c(5) == c5);  // deterministic
    CHECK(default_schedule_c(3) >= c5);  // more terms shrink the feasible c
    CHECK(default_schedule_c(8) <= c5);
    CHECK_THROWS_AS(default_schedule_c(2), InvalidInput);
    CHECK_THROWS_AS(default_schedule_c(16), OverflowError);
}

TEST_CASE("weyl averages on the full interval") {
    auto set = BaseSequence::naturals().first(200);
    const double pi = 3.141592653589793238462643;
    std::vector<AngleSample> angles = {{0.0, "zero"}, {pi, "rational(1/2)"}};
    auto prof = weyl_profile(set, angles, {50, 100, 150, 200});
    REQUIRE(prof.rows.size() == 2);
    CHECK(prof.rows[0].cls == WeylProfile::Class::ConvergesToLimit);
    CHECK(std::abs(prof.rows[0].limit - std::complex<double>{1, 0}) < 1e-12);
    // alternating sums: |A_N| <= 1/N
    CHECK(prof.rows[1].cls == WeylProfile::Class::ConvergesToZero);
    for (std::size_t i = 0; i < prof.N_grid.size(); ++i)
        CHECK(std::abs(prof.rows[1].values[i]) <= 1.0 / prof.N_grid[i] + 1e-12);
}

TEST_CASE("weyl averages of the squares at a quarter turn") {
    auto set = BaseSequence::perfect_powers(2).first(100);  // squares up to 10000
    const double pi = 3.141592653589793238462643;
    auto prof = weyl_profile(set, {{pi / 2, "rational(1/4)"}}, {2500, 5000, 7500, 10000});
    // n² mod 4 is 0 or 1 with equal frequency, so A_N -> (1 + i)/2
    auto last = prof.rows[0].values.back();
    CHECK(std::abs(last - std::complex<double>{0.5, 0.5}) <= 0.02);
    CHECK(prof.rows[0].cls == WeylProfile::Class::ConvergesToLimit);
}

TEST_CASE("weyl profile rejects bad input") {
    auto set = BaseSequence::naturals().first(10);
    CHECK_THROWS_AS(weyl_profile(IntegerSet{}, {{0.0, "zero"}}, {5}), InvalidInput);
    CHECK_THROWS_AS(weyl_profile(set, {{0.0, "zero"}}, {}), InvalidInput);
    CHECK_THROWS_AS(weyl_profile(set, {{0.0, "zero"}}, {5, 5}), InvalidInput);
    CHECK_THROWS_AS(weyl_profile(set, {{0.0, "zero"}}, {5, 10}, -1.0), InvalidInput);
}

TEST_CASE("golden angles") {
    auto a = golden_angles(5);
    REQUIRE(a.size() == 5);
    for (const auto& s : a) {
        CHECK(s.t > 0);
        CHECK(s.t < 2 * 3.14159265358979324);
        CHECK(s.tag == "irrational-proxy");
    }
    CHECK(a[0].t != a[1].t);
    CHECK_THROWS_AS(golden_angles(0), InvalidInput);
}

TEST_CASE("mesh exponent of a lacunary set is one") {
    std::vector<std::int64_t> v;
    for (int n = 0; n <= 20; ++n) v.push_back(std::int64_t{1} << n);
    std::vector<std::int64_t> grid;
    for (int k = 5; k <= 20; k += 3) grid.push_back(std::int64_t{1} << k);
    auto fit = mesh_exponent_fit(IntegerSet(v), grid);
    CHECK(fit.beta == doctest::Approx(1.0).epsilon(0.15));
    CHECK(!fit.rejected);
}

TEST_CASE("mesh exponent of a sum of two dyadics is two") {
    std::vector<std::int64_t> v;
    for (int n = 1; n <= 20; ++n)
        for (int j = 0; j < n; ++j) v.push_back((std::int64_t{1} << n) + (std::int64_t{1} << j));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<std::int64_t> grid;
    for (int k = 5; k <= 20; k += 3) grid.push_back(std::int64_t{1} << k);
    auto fit = mesh_exponent_fit(IntegerSet(v), grid);
    CHECK(fit.beta == doctest::Approx(2.0).epsilon(0.15));
    CHECK(!fit.rejected);
}

TEST_CASE("mesh fit rejects a full interval") {
    std::vector<std::int64_t> v(4096);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::int64_t>(i) + 1;
    std::vector<std::int64_t> grid;
    for (std::int64_t N = 8; N <= 4096; N *= 2) grid.push_back(N);
    auto fit = mesh_exponent_fit(IntegerSet(v), grid);
    CHECK(fit.rejected);
    CHECK_THROWS_AS(mesh_exponent_fit(IntegerSet(v), {8, 16}), InvalidInput);
    CHECK_THROWS_AS(mesh_exponent_fit(IntegerSet(v), {2, 8, 16}), InvalidInput);
}

TEST_CASE("lambda_q profile basics") {
    auto single = lambda_q_profile(IntegerSet{5}, {2, 4, 8}, 2, 0);
    for (double c : single.cq) CHECK(c == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(single.fitted_exponent) < 0.01);

    auto interval = lambda_q_profile(BaseSequence::naturals().first(64), {4, 8}, 2, 0);
    // the flat polynomial already gives ||e_A||_4 / ||e_A||_2 = 2.556...
    double exact4 = std::pow((2.0 * 64 * 64 * 64 + 64) / 3.0, 0.25) / 8.0;
    CHECK(interval.cq[0] >= exact4 - 1e-9);
    CHECK(interval.cq[1] >= interval.cq[0] - 1e-9);  // monotone in q

    CHECK_THROWS_AS(lambda_q_profile(IntegerSet{5}, {1.5}, 1, 0), InvalidInput);
    CHECK_THROWS_AS(lambda_q_profile(IntegerSet{}, {4.0}, 1, 0), InvalidInput);
}

TEST_CASE("lambda_q separates lacunary from full sets") {
    std::vector<std::int64_t> lac;
    for (int j = 0; j <= 10; ++j) lac.push_back(std::int64_t{1} << j);
    auto p_lac = lambda_q_profile(IntegerSet(lac), {4, 6, 8}, 3, 1);
    auto p_full = lambda_q_profile(BaseSequence::naturals().first(64), {4, 6, 8}, 3, 1);
    // a Sidon-type set keeps C_q near √q; the interval outruns it at q = 8
    CHECK(p_lac.cq[2] < p_full.cq[2]);
    for (double c : p_lac.cq) CHECK(c >= 1.0 - 1e-9);
}

TEST_CASE("uniform-convergence lower bound") {
    CHECK(uc_lower_bound(std::vector<std::int64_t>{5}, {5}, 2, 0) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(uc_lower_bound(std::vector<std::int64_t>{5}, {1}, 2, 0) == 0.0);

    std::vector<std::int64_t> window;
    for (std::int64_t n = -64; n <= 64; ++n) window.push_back(n);
    // the sign pattern of the Dirichlet kernel pushes past the trivial ratio
    CHECK(uc_lower_bound(window, {8}, 2, 0) >= 1.3);

    std::vector<std::int64_t> lac;
    for (int j = 0; j <= 8; ++j) lac.push_back(std::int64_t{1} << j);
    CHECK(uc_lower_bound(IntegerSet(lac), {16}, 4, 0) <= 3.0);
    CHECK_THROWS_AS(uc_lower_bound(std::vector<std::int64_t>{3, 3}, {4}, 1, 0), InvalidInput);
}

TEST_CASE("rider ratio") {
    auto single = rider_ratio(IntegerSet{7}, 1.0, 2, 0);
    CHECK(single.value == doctest::Approx(1.0).epsilon(0.01));
    CHECK(single.witness.term_count() == 1);

    auto small = rider_ratio(BaseSequence::naturals().first(8), 1.0, 4, 1);
    auto big = rider_ratio(BaseSequence::naturals().first(32), 1.0, 4, 1);
    CHECK(big.value > small.value);  // intervals are nowhere near p-Rider for p = 1
    CHECK_THROWS_AS(rider_ratio(IntegerSet{7}, 2.5, 2, 0), InvalidInput);
    CHECK_THROWS_AS(rider_ratio(IntegerSet{}, 1.0, 2, 0), InvalidInput);
}

TEST_CASE("zalcwasser exponents at moderate scale") {
    auto rows = zalcwasser_fit({64, 128, 256, 512}, {6.0, 8.0});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].exponent == doctest::Approx(1.0 - 2.0 / 6).epsilon(0.15));
    CHECK(rows[1].exponent == doctest::Approx(1.0 - 2.0 / 8).epsilon(0.15));
    CHECK(rows[0].residual < 0.2);
    CHECK_THROWS_AS(zalcwasser_fit({64, 128, 256}, {4.0}), InvalidInput);
    CHECK_THROWS_AS(zalcwasser_fit({64, 128}, {6.0}), InvalidInput);
}
