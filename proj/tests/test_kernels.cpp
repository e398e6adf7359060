#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lacuna/errors.hpp"
#include "lacuna/kernels.hpp"
#include "lacuna/norms.hpp"
#include "lacuna/relations.hpp"
#include "lacuna/rng.hpp"

using namespace lacuna;

TEST_CASE("Vallee-Poussin kernel coefficients") {
    auto V2 = vallee_poussin(2);
    CHECK(V2.coeff(2) == std::complex<double>{1.0, 0.0});
    CHECK(V2.coeff(3) == std::complex<double>{0.5, 0.0});
    CHECK(V2.coeff(4) == 0.0);
    CHECK(V2.coeff(-3) == std::complex<double>{0.5, 0.0});
    CHECK(vallee_poussin(1).coeff(0) == std::complex<double>{1.0, 0.0});
    CHECK(V2.is_real());
    CHECK_THROWS_AS(vallee_poussin(0), InvalidInput);
}

TEST_CASE("Vallee-Poussin L1 bound") {
    for (std::int64_t M : {1, 2, 8, 32}) {
        double l1 = lq_norm(vallee_poussin(M), 1.0).value;
        CHECK(l1 <= 3.0 + 1e-6);
        CHECK(1.0 + l1 <= 4.0 + 1e-6);  // ‖δ₀ − V‖ <= 1 + ‖V‖₁
    }
}

TEST_CASE("Riesz product coefficients") {
    auto R = riesz_product(IntegerSet{3, 5}).product;
    CHECK(R.coeff(0) == std::complex<double>{1.0, 0.0});
    CHECK(R.coeff(3) == std::complex<double>{0.5, 0.0});
    CHECK(R.coeff(5) == std::complex<double>{0.5, 0.0});
    CHECK(R.coeff(8) == std::complex<double>{0.25, 0.0});
    CHECK(R.coeff(2) == std::complex<double>{0.25, 0.0});

    auto R2 = riesz_product(IntegerSet{1, 2, 4}).product;
    CHECK(R2.coeff(7) == std::complex<double>{0.125, 0.0});
}

TEST_CASE("Riesz product positivity and mass") {
    for (auto B : {IntegerSet{3, 5}, IntegerSet{1, 2, 4, 8}, IntegerSet{7, 11, 20}}) {
        auto R = riesz_product(B).product;
        auto vals = evaluate_grid(R, 1024);
        for (const auto& v : vals) {
            CHECK(v.real() >= -1e-9);
            CHECK(std::abs(v.imag()) <= 1e-9);
        }
        CHECK(lq_norm(R, 1.0).value == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("Riesz collision detection matches quasi-independence") {
    CHECK_THROWS_AS(riesz_product(IntegerSet{3, 4, 5, 6}), InvalidInput);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        CounterRng rng{seed};
        std::vector<std::int64_t> v;
        std::uint64_t i = 0;
        while (v.size() < 3 + seed % 6) {
            auto x = static_cast<std::int64_t>(rng.uniform(i++) * 200) + 1;
            if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
        }
        IntegerSet B(v);
        bool collided = false;
        try {
            riesz_product(B);
        } catch (const InvalidInput&) {
            collided = true;
        }
        CHECK(collided == !is_quasi_independent(B));
    }
}

TEST_CASE("Riesz truncation reports a valid tail bound") {
    IntegerSet B{1, 2, 4, 8, 16};
    auto exact = riesz_product(B);
    auto trunc = riesz_product(B, 2);
    // C(5,3) + C(5,4) + C(5,5)
    CHECK(trunc.l1_tail_bound == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(exact.l1_tail_bound == 0.0);

    double dropped = 0;
    for (const auto& [n, c] : exact.product.coeffs())
        dropped += std::abs(c - trunc.product.coeff(n));
    CHECK(dropped <= trunc.l1_tail_bound + 1e-12);
    CHECK(trunc.product.coeff(0) == std::complex<double>{1.0, 0.0});
    // frequency 3 from supports of size <= 2: 1+2 and 4-1, a quarter each
    CHECK(trunc.product.coeff(3) == std::complex<double>{0.5, 0.0});
}

TEST_CASE("pseudo-complement of a singleton") {
    auto res = pseudo_complement(IntegerSet{5}, IntegerSet{5, 9}, 2);
    CHECK(res.mu.coeff(5) == std::complex<double>{1.0, 0.0});
    CHECK(res.mu.coeff(9) == 0.0);
    CHECK(res.lower_ok);
    CHECK(res.vanish_ok);
    CHECK(res.l1_ok);
    CHECK(res.l1_norm <= 8.0 + 1e-6);
    CHECK_NOTHROW(res.require_valid());
}

TEST_CASE("pseudo-complement flags a sumset landing in Lambda") {
    auto res = pseudo_complement(IntegerSet{5, 7}, IntegerSet{5, 7, 12}, 2);
    CHECK(res.mu.coeff(12) == std::complex<double>{0.5, 0.0});
    CHECK(!res.vanish_ok);
    CHECK(!res.valid());
    CHECK_THROWS_AS(res.require_valid(), VerificationFailed);
}

TEST_CASE("pseudo-complement coefficient identity") {
    IntegerSet B{9, 14};
    IntegerSet Lambda{9, 14, 40};
    std::int64_t M = 4;
    auto res = pseudo_complement(B, Lambda, M);
    auto R = riesz_product(B).product;
    auto V = vallee_poussin(M);
    for (std::int64_t k : {0LL, 5LL, 9LL, 14LL, 23LL, 40LL}) {
        auto expected = 2.0 * (1.0 - V.coeff(k)) * R.coeff(k);
        CHECK(std::abs(res.mu.coeff(k) - expected) <= 1e-12);
    }
}

TEST_CASE("pseudo-complement preconditions") {
    CHECK_THROWS_AS(pseudo_complement(IntegerSet{4}, IntegerSet{4}, 2), InvalidInput);
    CHECK_THROWS_AS(pseudo_complement(IntegerSet{5}, IntegerSet{9}, 2), InvalidInput);
    CHECK_THROWS_AS(pseudo_complement(IntegerSet{}, IntegerSet{5}, 2), InvalidInput);
    // a relation inside B surfaces through the Riesz certificate
    CHECK_THROWS_AS(
        pseudo_complement(IntegerSet{30, 40, 50, 60}, IntegerSet{30, 40, 50, 60}, 2),
        InvalidInput);
}

TEST_CASE("pseudo-complement on sampled tails") {
    // B is the whole tail of the sample above 2M, with M grown until the
    // octave (M, 2M] is free of sample points; then Λ∖B sits below M where
    // the kernel cancels everything
    auto sched = MeanSchedule::t2_2(1.0);
    int valid = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 8 && total < 5; ++seed) {
        IntegerSet lambda = sample_set(sched, BaseSequence::naturals(), 3000, seed);
        std::int64_t M = 27;
        while (lambda.count_in(M + 1, 2 * M + 1) > 0) ++M;
        IntegerSet B = lambda.slice(2 * M + 1, lambda.max() + 1);
        if (B.size() < 3 || B.size() > 14) continue;
        if (is_quasi_independent_checked(B) != Ternary::True) continue;
        ++total;
        auto res = pseudo_complement(B, lambda, M);
        CHECK(res.lower_ok);
        CHECK(res.vanish_ok);
        CHECK(res.l1_ok);
        if (res.valid()) ++valid;
    }
    CHECK(total >= 3);
    CHECK(valid == total);
}
