#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lacuna/errors.hpp"
#include "lacuna/rng.hpp"
#include "lacuna/schedules.hpp"

using namespace lacuna;

TEST_CASE("mean_at formulas") {
    auto t22 = MeanSchedule::t2_2(1.0);
    CHECK(t22.mean_at(16) == doctest::Approx(std::log(std::log(16.0)) / 16).epsilon(1e-12));

    auto t27 = MeanSchedule::t2_7(1.0 / 24, 0.5);
    // k=5 lies in [4,8), so the block index is 2
    CHECK(t27.mean_at(5) == doctest::Approx((1.0 / 24) * 2 / 4).epsilon(1e-12));

    auto cust = MeanSchedule::custom({0.5, 0.5});
    CHECK(cust.mean_at(2) == 0.5);
    CHECK(cust.mean_at(3) == 0.0);

    CHECK_THROWS_AS(t22.mean_at(0), InvalidInput);
}

TEST_CASE("mean_at clamps below the formula domain and clips to [0,1]") {
    auto t22 = MeanSchedule::t2_2(1.0);
    CHECK(t22.mean_at(1) == t22.mean_at(3));
    CHECK(t22.mean_at(2) == t22.mean_at(3));
    auto big = MeanSchedule::katz_mall(10.0);
    CHECK(big.mean_at(1) == 1.0);
    for (std::int64_t k : {1, 2, 3, 10, 1000})
        CHECK(MeanSchedule::t2_5(5.0, 1.5).mean_at(k) <= 1.0);
}

TEST_CASE("sigma partial sums") {
    CHECK(MeanSchedule::custom({0.2, 0.3, 0.5}).sigma(3) == doctest::Approx(1.0).epsilon(1e-12));

    auto t27 = MeanSchedule::t2_7(1.0 / 24, 0.5);
    for (int n : {3, 6, 10}) {
        double block = t27.sigma((std::int64_t{1} << (n + 1)) - 1) -
                       t27.sigma((std::int64_t{1} << n) - 1);
        CHECK(block == doctest::Approx(n / 24.0).epsilon(1e-10));
    }

    // independent long double summation
    auto t22 = MeanSchedule::t2_2(1.0);
    long double ref = 0;
    for (std::int64_t k = 1; k <= 100000; ++k)
        ref += static_cast<long double>(t22.mean_at(k));
    CHECK(t22.sigma(100000) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-6));
}

TEST_CASE("block boundaries") {
    CHECK(BlockSchedule::n_pow_n().boundary(3) == 27);
    CHECK(BlockSchedule::dyadic().boundary(5) == 32);
    CHECK(BlockSchedule::n_pow_beta_n(2.0).boundary(3) == 729);
    CHECK(block_boundary(BlockSchedule::n_pow_n(), 4) == 256);
    CHECK_THROWS_AS(BlockSchedule::n_pow_n().boundary(16), OverflowError);
    CHECK_THROWS_AS(BlockSchedule::dyadic().boundary(63), OverflowError);
}

TEST_CASE("block boundaries eventually double") {
    for (auto sched : {BlockSchedule::n_pow_n(), BlockSchedule::dyadic(),
                       BlockSchedule::exp_loglog_sq(), BlockSchedule::n_pow_beta_n(1.5)}) {
        std::int64_t prev = 0;
        for (std::int64_t n = sched.regular_from(); n <= 20; ++n) {
            std::int64_t m;
            try {
                m = sched.boundary(n);
            } catch (const OverflowError&) {
                break;
            }
            if (prev > 0) CHECK(m >= 2 * prev);
            prev = m;
        }
    }
}

TEST_CASE("base sequences") {
    CHECK(BaseSequence::perfect_powers(2).first(4) == IntegerSet{1, 4, 9, 16});
    CHECK(BaseSequence::primes().first(5) == IntegerSet{2, 3, 5, 7, 11});
    CHECK(BaseSequence::naturals().first(3) == IntegerSet{1, 2, 3});

    // sieve vs trial division
    IntegerSet primes = BaseSequence::primes().first(168);
    CHECK(primes.max() == 997);
    for (std::int64_t p : primes) {
        bool composite = false;
        for (std::int64_t d = 2; d * d <= p; ++d)
            if (p % d == 0) composite = true;
        CHECK(!composite);
    }
}

TEST_CASE("counting_nu") {
    CHECK(BaseSequence::perfect_powers(2).counting_nu(1, 17) == 4);
    CHECK(BaseSequence::primes().counting_nu(10, 20) == 4);
    for (std::int64_t N : {1, 7, 100})
        CHECK(BaseSequence::naturals().counting_nu(N, 2 * N) == N);

    // consistency with the explicit enumeration
    for (auto base : {BaseSequence::naturals(), BaseSequence::perfect_powers(3),
                      BaseSequence::primes()}) {
        IntegerSet head = base.first(200);
        for (std::int64_t k : {1, 10, 500, 1000})
            if (k <= head.max())
                CHECK(base.counting_nu(1, k + 1) ==
                      static_cast<std::int64_t>(head.count_in(1, k + 1)));
    }
}

TEST_CASE("sample_set determinism and degenerate means") {
    CHECK(sample_set(MeanSchedule::custom({1, 1, 1}), BaseSequence::naturals(), 3, 42) ==
          IntegerSet{1, 2, 3});
    CHECK(sample_set(MeanSchedule::custom({0, 0, 0}), BaseSequence::naturals(), 3, 42).empty());

    auto sched = MeanSchedule::t2_2(1.0);
    auto a = sample_set(sched, BaseSequence::naturals(), 10000, 7);
    auto b = sample_set(sched, BaseSequence::naturals(), 10000, 7);
    CHECK(a == b);
    auto c = sample_set(sched, BaseSequence::naturals(), 10000, 8);
    CHECK(a != c);
}

TEST_CASE("sampled cardinality concentrates around sigma") {
    auto sched = MeanSchedule::t2_2(1.0);
    const std::int64_t N = 100000;
    double sigma = sched.sigma(N);
    double total = 0;
    const int seeds = 400;
    for (int s = 0; s < seeds; ++s)
        total += static_cast<double>(sample_set(sched, BaseSequence::naturals(), N,
                                                static_cast<std::uint64_t>(1000 + s))
                                         .size());
    CHECK(std::abs(total / seeds - sigma) <= 4 * std::sqrt(sigma));
}

TEST_CASE("coupled monotone thinning") {
    auto thin = MeanSchedule::t2_2(0.5);
    auto thick = MeanSchedule::t2_2(1.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto a = sample_set(thin, BaseSequence::naturals(), 2000, seed);
        auto b = sample_set(thick, BaseSequence::naturals(), 2000, seed);
        bool subset = true;
        for (std::int64_t x : a)
            if (!b.contains(x)) subset = false;
        CHECK(subset);
    }
}

TEST_CASE("block_trace") {
    IntegerSet s{1, 5, 9, 30};
    CHECK(block_trace(s, 5, 10) == IntegerSet{5, 9});
    CHECK(block_trace(s, 7, 7).empty());
    CHECK(block_trace(s, 1, 31) == s);
}

TEST_CASE("delta non-increasing past 16") {
    // t2_6 needs moderate alpha here: for alpha >= 1.8 the formula still
    // increases just past 16 and only turns monotone near k = 20
    for (auto sched : {MeanSchedule::t2_2(1.0), MeanSchedule::t2_5(1.0, 1.5),
                       MeanSchedule::t2_6(1.0, 1.4)}) {
        double prev = sched.mean_at(16);
        for (std::int64_t k = 17; k <= 1000000; ++k) {
            double cur = sched.mean_at(k);
            if (cur > prev) {
                CHECK(cur <= prev);
                break;
            }
            prev = cur;
        }
    }
}

TEST_CASE("sigma_N over log N increases when k*delta_k diverges") {
    for (auto sched : {MeanSchedule::t2_2(1.0), MeanSchedule::t2_5(1.0, 1.5),
                       MeanSchedule::t2_6(1.0, 1.5), MeanSchedule::t2_7(0.04, 0.04),
                       MeanSchedule::t2_10(1.0, 1.5, {})}) {
        CHECK(sched.k_delta_diverges());
        double prev = 0;
        for (std::int64_t N : {1000, 10000, 100000, 1000000}) {
            double r = sched.sigma(N) / std::log(static_cast<double>(N));
            CHECK(r > prev);
            prev = r;
        }
    }
    CHECK(!MeanSchedule::katz_mall(1.0).k_delta_diverges());
}

TEST_CASE("regularity report") {
    auto naturals = regularity_report(BaseSequence::naturals(), [](double x) { return x; },
                                      {100, 1000, 10000});
    for (const auto& row : naturals.rows) {
        CHECK(row.ratio_count_over_phi == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row.ratio_phi_doubling == doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK(naturals.doubling_holds);
    CHECK(naturals.fitted_d == doctest::Approx(1.0).epsilon(1e-6));

    auto squares = regularity_report(
        BaseSequence::perfect_powers(2),
        [](double x) { return (std::sqrt(2.0) - 1) * std::sqrt(x); },
        {1000, 10000, 100000, 1000000});
    CHECK(std::abs(squares.rows.back().ratio_count_over_phi - 1) <= 0.05);
    CHECK(squares.fitted_d == doctest::Approx(0.5).epsilon(0.05));

    auto primes = regularity_report(BaseSequence::primes(),
                                    [](double x) { return x / std::log(x); },
                                    {10000, 100000, 1000000});
    CHECK(std::abs(primes.rows.back().ratio_count_over_phi - 1) <= 0.15);
}

TEST_CASE("rng stream is platform-stable") {
    CounterRng rng{12345};
    CHECK(rng.bits(0) == splitmix64(splitmix64(12345)));
    CHECK(rng.uniform(7) >= 0.0);
    CHECK(rng.uniform(7) < 1.0);
    CHECK(rng.uniform(7) == rng.uniform(7));
    CHECK(rng.derive(1).seed != rng.derive(2).seed);
}
