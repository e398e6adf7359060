#include "lacuna/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lacuna/errors.hpp"
#include "lacuna/rng.hpp"

namespace lacuna {
namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<double> grid_moduli(const TrigPolynomial& f, std::size_t G) {
    auto vals = evaluate_grid(f, G);
    std::vector<double> out(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j) out[j] = std::abs(vals[j]);
    return out;
}

double power_mean(const std::vector<double>& m, double q) {
    double s = 0, comp = 0;
    for (double v : m) {
        double y = std::pow(v, q) - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return std::pow(s / static_cast<double>(m.size()), 1.0 / q);
}

bool is_even_integer(double q) {
    return q == std::floor(q) && static_cast<std::int64_t>(q) % 2 == 0;
}

}  // namespace

NormReport sup_norm(const TrigPolynomial& f, int oversample) {
    if (oversample < 4) throw InvalidInput("sup_norm: oversample must be >= 4");
    NormReport rep;
    rep.method = NormReport::Method::GridQuadrature;
    if (f.empty()) return rep;
    auto d = static_cast<std::size_t>(f.degree());
    std::size_t G = next_pow2(std::max<std::size_t>(
        static_cast<std::size_t>(oversample) * (2 * d + 2), 16));
    auto m = grid_moduli(f, G);
    rep.value = *std::max_element(m.begin(), m.end());
    rep.grid_size = G;
    // |f'| <= d·‖f‖_∞, so the sup exceeds the grid max by at most
    // ‖f‖_∞·πd/G; solve for the gap
    double factor = std::numbers::pi * static_cast<double>(d) / static_cast<double>(G);
    rep.error_estimate = rep.value * factor / (1 - factor);
    return rep;
}

NormReport lq_norm(const TrigPolynomial& f, double q, std::size_t grid_size) {
    if (q < 1) throw InvalidInput("lq_norm: q must be >= 1");
    NormReport rep;
    rep.method = NormReport::Method::GridQuadrature;
    if (f.empty()) return rep;
    auto d = static_cast<std::size_t>(f.degree());
    std::size_t min_grid = 2 * d + 2;
    std::size_t G;
    if (grid_size == 0) {
        G = is_even_integer(q)
                ? next_pow2(static_cast<std::size_t>(q) * d + 2)
                : next_pow2(std::max<std::size_t>(8 * min_grid, 4096));
    } else {
        if (grid_size < min_grid) throw InvalidInput("lq_norm: grid below 2·degree+2");
        G = next_pow2(grid_size);
    }
    auto m = grid_moduli(f, G);
    rep.value = power_mean(m, q);
    rep.grid_size = G;
    bool exact = is_even_integer(q) && G > static_cast<std::size_t>(q) * d;
    if (!exact && G / 2 >= min_grid)
        rep.error_estimate = std::abs(rep.value - power_mean(grid_moduli(f, G / 2), q));
    return rep;
}

std::uint64_t lq_norm_exact_even(const IntegerSet& A, int q) {
    if (q < 2 || q % 2 != 0) throw InvalidInput("lq_norm_exact_even: q must be even and >= 2");
    if (A.empty()) return 0;
    int m = q / 2;
    if (std::pow(static_cast<double>(A.size()), m) > 1e8)
        throw ResourceExceeded("lq_norm_exact_even: |A|^{q/2} beyond compute budget");
    std::int64_t top = A.max() * m;
    // counts of m-tuple sums
    std::vector<std::uint64_t> r(static_cast<std::size_t>(top) + 1, 0);
    r[0] = 1;
    std::int64_t reach = 0;
    for (int i = 0; i < m; ++i) {
        std::vector<std::uint64_t> next(r.size(), 0);
        for (std::int64_t s = 0; s <= reach; ++s) {
            auto c = r[static_cast<std::size_t>(s)];
            if (c == 0) continue;
            for (std::int64_t a : A) next[static_cast<std::size_t>(s + a)] += c;
        }
        reach += A.max();
        r.swap(next);
    }
    std::uint64_t total = 0;
    for (auto c : r) total += c * c;
    return total;
}

NormReport psi_parameter(const IntegerSet& A, std::vector<double> p_grid) {
    NormReport rep;
    rep.method = NormReport::Method::GridQuadrature;
    if (A.empty()) return rep;
    if (p_grid.empty()) {
        p_grid.push_back(2.0);
        for (int i = 1; i <= 24; ++i)
            p_grid.push_back(2.0 * std::pow(32.0, i / 24.0));
    }
    for (double p : p_grid)
        if (p < 2) throw InvalidInput("psi_parameter: p grid must stay within [2, inf)");

    TrigPolynomial f = TrigPolynomial::from_set(A);
    auto d = static_cast<std::size_t>(f.degree());
    std::size_t G = next_pow2(std::max<std::size_t>(8 * (2 * d + 2), 4096));
    auto m = grid_moduli(f, G);
    rep.grid_size = G;
    for (double p : p_grid) {
        double v = power_mean(m, p) / std::sqrt(p);
        if (v > rep.value) {
            rep.value = v;
            rep.param = p;
        }
    }
    return rep;
}

NormReport orlicz_psi2_norm(const TrigPolynomial& f, std::size_t grid_size) {
    if (f.empty()) throw InvalidInput("orlicz_psi2_norm: zero polynomial");
    auto d = static_cast<std::size_t>(f.degree());
    std::size_t G = grid_size == 0
                        ? next_pow2(std::max<std::size_t>(8 * (2 * d + 2), 4096))
                        : next_pow2(std::max(grid_size, 2 * d + 2));
    auto m = grid_moduli(f, G);
    double peak = *std::max_element(m.begin(), m.end());

    auto fits = [&](double theta) {
        double mean = 0;
        for (double v : m) mean += std::expm1(v * v / (theta * theta));
        return mean / static_cast<double>(m.size()) <= 1.0;
    };
    double hi = peak / std::sqrt(std::log(2.0)) + 1e-300;  // Ψ(peak/hi) <= 1 pointwise
    double lo = hi * 1e-8;
    while (fits(lo) && lo > 1e-300) lo /= 2;  // ensure lo fails, hi fits
    for (int it = 0; it < 200 && (hi - lo) > 1e-8 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (fits(mid) ? hi : lo) = mid;
    }
    NormReport rep;
    rep.method = NormReport::Method::GridQuadrature;
    rep.value = hi;
    rep.grid_size = G;
    rep.error_estimate = hi - lo;
    return rep;
}

NormReport rademacher_norm(const TrigPolynomial& f, int trials, std::uint64_t seed,
                           int oversample) {
    if (trials < 1) throw InvalidInput("rademacher_norm: trials must be >= 1");
    NormReport rep;
    rep.method = NormReport::Method::MonteCarlo;
    rep.trials = static_cast<std::size_t>(trials);
    if (f.empty()) return rep;

    double sum = 0, sumsq = 0;
    CounterRng rng{seed};
    for (int t = 0; t < trials; ++t) {
        CounterRng tr = rng.derive(static_cast<std::uint64_t>(t));
        TrigPolynomial g;
        std::uint64_t i = 0;
        for (const auto& [n, c] : f.coeffs())
            g.set_coeff(n, static_cast<double>(tr.sign(i++)) * c);
        double v = sup_norm(g, oversample).value;
        sum += v;
        sumsq += v * v;
    }
    rep.value = sum / trials;
    if (trials > 1) {
        double var = std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1));
        rep.error_estimate = std::sqrt(var / trials);
    }
    return rep;
}

RearrangementResult coefficient_rearrangement(const TrigPolynomial& f, double alpha) {
    if (alpha <= 0) throw InvalidInput("coefficient_rearrangement: alpha must be > 0");
    RearrangementResult res;
    for (const auto& [n, c] : f.coeffs()) res.sorted_moduli.push_back(std::abs(c));
    std::sort(res.sorted_moduli.rbegin(), res.sorted_moduli.rend());

    auto phi = [alpha](double x) { return x * std::pow(std::log1p(x), alpha); };
    auto phi_inv = [&](double y) {
        double hi = 1;
        while (phi(hi) < y) hi *= 2;
        double lo = 0;
        while (hi - lo > 1e-10 * std::max(1.0, hi)) {
            double mid = 0.5 * (lo + hi);
            (phi(mid) >= y ? hi : lo) = mid;
        }
        return hi;
    };

    for (std::size_t n = 1; n <= res.sorted_moduli.size(); ++n) {
        double a = res.sorted_moduli[n - 1];
        res.functional = std::max(res.functional, phi_inv(static_cast<double>(n)) * a);
        if (n >= 3)
            res.fitted_c = std::max(
                res.fitted_c, a * static_cast<double>(n) /
                                  std::pow(std::log(static_cast<double>(n)), alpha));
    }
    return res;
}

}  // namespace lacuna
