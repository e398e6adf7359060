#include "lacuna/schedules.hpp"

#include <cmath>
#include <limits>

#include "lacuna/errors.hpp"
#include "lacuna/rng.hpp"

namespace lacuna {
namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

double loglog(double x) { return std::log(std::log(x)); }

double clip01(double x) {
    if (x < 0) return 0;
    if (x > 1) return 1;
    return x;
}

// n^e with overflow check.
std::int64_t checked_ipow(std::int64_t n, std::int64_t e) {
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < e; ++i) {
        if (n != 0 && r > kInt64Max / n) throw OverflowError("integer power exceeds 64 bits");
        r *= n;
    }
    return r;
}

// floor(x^{1/d}) for x >= 0.
std::int64_t floor_root(std::int64_t x, int d) {
    if (x <= 0) return 0;
    if (d == 1) return x;
    auto r = static_cast<std::int64_t>(std::pow(static_cast<double>(x), 1.0 / d));
    while (r > 0) {
        bool over = false;
        try {
            if (checked_ipow(r, d) > x) over = true;
        } catch (const OverflowError&) {
            over = true;
        }
        if (!over) break;
        --r;
    }
    while (true) {
        std::int64_t next;
        try {
            next = checked_ipow(r + 1, d);
        } catch (const OverflowError&) {
            break;
        }
        if (next > x) break;
        ++r;
    }
    return r;
}

std::vector<bool> sieve_upto(std::int64_t n) {
    std::vector<bool> is_prime(static_cast<std::size_t>(std::max<std::int64_t>(n + 1, 2)), true);
    is_prime[0] = is_prime[1] = false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (is_prime[static_cast<std::size_t>(p)])
            for (std::int64_t q = p * p; q <= n; q += p) is_prime[static_cast<std::size_t>(q)] = false;
    return is_prime;
}

}  // namespace

// ---------------------------------------------------------------------------
// MeanSchedule
// ---------------------------------------------------------------------------

MeanSchedule MeanSchedule::t2_2(double c) {
    MeanSchedule s;
    s.variant_ = Variant::T2_2;
    s.c_ = c;
    return s;
}

MeanSchedule MeanSchedule::p2_4(double c) {
    MeanSchedule s = t2_2(c);
    s.variant_ = Variant::P2_4;
    return s;
}

MeanSchedule MeanSchedule::t2_5(double c, double p) {
    if (p <= 1 || p >= 2) throw InvalidInput("t2_5: p must lie in (1, 2)");
    MeanSchedule s;
    s.variant_ = Variant::T2_5;
    s.c_ = c;
    s.p_ = p;
    s.alpha_ = 2 * (p - 1) / (2 - p);
    return s;
}

MeanSchedule MeanSchedule::t2_6(double c, double p) {
    MeanSchedule s = t2_5(c, p);
    s.variant_ = Variant::T2_6;
    return s;
}

MeanSchedule MeanSchedule::t2_7(double c, double tau) {
    if (tau < 0 || tau > 1) throw InvalidInput("t2_7: tau must lie in [0, 1]");
    MeanSchedule s;
    s.variant_ = Variant::T2_7;
    s.c_ = c;
    s.tau_ = tau;
    return s;
}

MeanSchedule MeanSchedule::t2_10(double c, double p, std::optional<double> beta) {
    if (p < 4.0 / 3.0 || p >= 2) throw InvalidInput("t2_10: p must lie in [4/3, 2)");
    MeanSchedule s;
    s.variant_ = Variant::T2_10;
    s.c_ = c;
    s.p_ = p;
    s.alpha_ = 2 * (p - 1) / (2 - p);
    s.beta_ = beta.value_or(s.alpha_ + 1);
    if (s.beta_ <= s.alpha_) throw InvalidInput("t2_10: beta must exceed alpha");
    return s;
}

MeanSchedule MeanSchedule::katz_mall(double c) {
    MeanSchedule s;
    s.variant_ = Variant::KatzMall;
    s.c_ = c;
    return s;
}

MeanSchedule MeanSchedule::custom(std::vector<double> table) {
    for (double v : table)
        if (v < 0 || v > 1) throw InvalidInput("custom schedule entries must lie in [0, 1]");
    MeanSchedule s;
    s.variant_ = Variant::Custom;
    s.table_ = std::move(table);
    return s;
}

bool MeanSchedule::k_delta_diverges() const {
    return variant_ != Variant::KatzMall && variant_ != Variant::Custom;
}

double MeanSchedule::mean_continuous(double t) const {
    switch (variant_) {
        case Variant::T2_2:
        case Variant::P2_4: {
            double u = std::max(t, 3.0);
            return clip01(c_ * loglog(u) / u);
        }
        case Variant::T2_5:
        case Variant::T2_10: {
            double u = std::max(t, 4.0);
            return clip01(c_ * std::pow(std::log(u), alpha_) /
                          (u * std::pow(loglog(u), alpha_ + 1)));
        }
        case Variant::T2_6: {
            double u = std::max(t, 4.0);
            return clip01(c_ * std::pow(std::log(u), alpha_) * loglog(u) / u);
        }
        case Variant::T2_7: {
            double u = std::max(t, 4.0);
            auto n = static_cast<std::int64_t>(std::floor(std::log2(u)));
            return clip01(c_ * static_cast<double>(n) * std::exp2(-static_cast<double>(n)));
        }
        case Variant::KatzMall:
            return clip01(c_ / std::max(t, 1.0));
        case Variant::Custom: {
            auto k = static_cast<std::int64_t>(std::floor(t));
            if (k < 1 || static_cast<std::size_t>(k) > table_.size()) return 0;
            return table_[static_cast<std::size_t>(k - 1)];
        }
    }
    return 0;
}

double MeanSchedule::mean_at(std::int64_t k) const {
    if (k < 1) throw InvalidInput("mean_at: k must be >= 1");
    return mean_continuous(static_cast<double>(k));
}

double MeanSchedule::sigma(std::int64_t N) const {
    if (N < 1) throw InvalidInput("sigma: N must be >= 1");
    double sum = 0, comp = 0;
    for (std::int64_t k = 1; k <= N; ++k) {
        double y = mean_at(k) - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

std::string MeanSchedule::tag() const {
    switch (variant_) {
        case Variant::T2_2: return "t2_2(c=" + std::to_string(c_) + ")";
        case Variant::P2_4: return "p2_4(c=" + std::to_string(c_) + ")";
        case Variant::T2_5: return "t2_5(c=" + std::to_string(c_) + ",p=" + std::to_string(p_) + ")";
        case Variant::T2_6: return "t2_6(c=" + std::to_string(c_) + ",p=" + std::to_string(p_) + ")";
        case Variant::T2_7: return "t2_7(c=" + std::to_string(c_) + ",tau=" + std::to_string(tau_) + ")";
        case Variant::T2_10:
            return "t2_10(c=" + std::to_string(c_) + ",p=" + std::to_string(p_) +
                   ",beta=" + std::to_string(beta_) + ")";
        case Variant::KatzMall: return "katz_mall(c=" + std::to_string(c_) + ")";
        case Variant::Custom: return "custom(n=" + std::to_string(table_.size()) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// BlockSchedule
// ---------------------------------------------------------------------------

std::int64_t BlockSchedule::boundary(std::int64_t n) const {
    if (n < first_index()) throw InvalidInput("block boundary index below first_index");
    switch (variant_) {
        case Variant::NPowN:
            return checked_ipow(n, n);
        case Variant::Dyadic:
            if (n > 62) throw OverflowError("2^n exceeds 64 bits");
            return std::int64_t{1} << n;
        case Variant::ExpLogLogSq: {
            long double nn = static_cast<long double>(std::max<std::int64_t>(n, 3));
            long double ll = std::log(std::log(nn));
            long double v = std::exp(static_cast<long double>(n) * ll * ll);
            if (v >= static_cast<long double>(kInt64Max)) throw OverflowError("M_n exceeds 64 bits");
            return static_cast<std::int64_t>(std::ceil(v));
        }
        case Variant::NPowBetaN: {
            long double e = beta_ * static_cast<long double>(n);
            auto ei = static_cast<std::int64_t>(std::llround(static_cast<double>(e)));
            if (std::abs(e - static_cast<long double>(ei)) < 1e-9L)
                return checked_ipow(n, ei);  // exact when β·n is integral
            long double v = std::pow(static_cast<long double>(n), e);
            if (v >= static_cast<long double>(kInt64Max)) throw OverflowError("M_n exceeds 64 bits");
            return static_cast<std::int64_t>(std::ceil(v));
        }
    }
    return 0;
}

std::int64_t BlockSchedule::regular_from() const {
    switch (variant_) {
        case Variant::NPowN: return 1;
        case Variant::Dyadic: return 0;
        case Variant::ExpLogLogSq: return 6;
        case Variant::NPowBetaN: return 2;
    }
    return 1;
}

std::string BlockSchedule::tag() const {
    switch (variant_) {
        case Variant::NPowN: return "n_pow_n";
        case Variant::Dyadic: return "dyadic";
        case Variant::ExpLogLogSq: return "exp_loglog_sq";
        case Variant::NPowBetaN: return "n_pow_beta_n(beta=" + std::to_string(beta_) + ")";
    }
    return "?";
}

std::int64_t block_boundary(const BlockSchedule& s, std::int64_t n) { return s.boundary(n); }

// ---------------------------------------------------------------------------
// BaseSequence
// ---------------------------------------------------------------------------

BaseSequence BaseSequence::perfect_powers(int d) {
    if (d < 1) throw InvalidInput("perfect_powers: d must be >= 1");
    return BaseSequence{Variant::PerfectPowers, d, {}};
}

BaseSequence BaseSequence::custom(std::vector<std::int64_t> sorted) {
    IntegerSet check(sorted);  // validates sorted/distinct/positive
    if (check.size() != sorted.size())
        throw InvalidInput("custom base: elements must be distinct");
    return BaseSequence{Variant::Custom, 0, std::move(sorted)};
}

std::int64_t BaseSequence::element(std::int64_t n) const {
    if (n < 1) throw InvalidInput("element: index must be >= 1");
    switch (variant_) {
        case Variant::Naturals:
            return n;
        case Variant::PerfectPowers:
            return checked_ipow(n, d_);
        case Variant::Primes:
            return first(n)[static_cast<std::size_t>(n - 1)];
        case Variant::Custom:
            if (static_cast<std::size_t>(n) > table_.size())
                throw InvalidInput("custom base: index past end of table");
            return table_[static_cast<std::size_t>(n - 1)];
    }
    return 0;
}

IntegerSet BaseSequence::first(std::int64_t N) const {
    if (N < 1) throw InvalidInput("first: N must be >= 1");
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(N));
    switch (variant_) {
        case Variant::Naturals:
            for (std::int64_t n = 1; n <= N; ++n) out.push_back(n);
            break;
        case Variant::PerfectPowers:
            for (std::int64_t n = 1; n <= N; ++n) out.push_back(checked_ipow(n, d_));
            break;
        case Variant::Primes: {
            // p_N < N (ln N + ln ln N) for N >= 6
            double nd = static_cast<double>(std::max<std::int64_t>(N, 6));
            auto bound = static_cast<std::int64_t>(nd * (std::log(nd) + std::log(std::log(nd)))) + 16;
            auto is_prime = sieve_upto(bound);
            for (std::int64_t p = 2; p <= bound && std::ssize(out) < N; ++p)
                if (is_prime[static_cast<std::size_t>(p)]) out.push_back(p);
            break;
        }
        case Variant::Custom:
            if (static_cast<std::size_t>(N) > table_.size())
                throw InvalidInput("custom base: fewer elements than requested");
            out.assign(table_.begin(), table_.begin() + N);
            break;
    }
    return IntegerSet(std::move(out));
}

std::int64_t BaseSequence::counting_nu(std::int64_t lo, std::int64_t hi) const {
    if (lo > hi) throw InvalidInput("counting_nu: lo > hi");
    std::int64_t a = std::max<std::int64_t>(lo, 1), b = hi;  // elements live in [1, inf)
    if (a >= b) return 0;
    switch (variant_) {
        case Variant::Naturals:
            return b - a;
        case Variant::PerfectPowers:
            return floor_root(b - 1, d_) - floor_root(a - 1, d_);
        case Variant::Primes: {
            auto is_prime = sieve_upto(b - 1);
            std::int64_t count = 0;
            for (std::int64_t x = a; x < b; ++x)
                if (is_prime[static_cast<std::size_t>(x)]) ++count;
            return count;
        }
        case Variant::Custom: {
            auto lo_it = std::lower_bound(table_.begin(), table_.end(), a);
            auto hi_it = std::lower_bound(table_.begin(), table_.end(), b);
            return hi_it - lo_it;
        }
    }
    return 0;
}

std::string BaseSequence::tag() const {
    switch (variant_) {
        case Variant::Naturals: return "naturals";
        case Variant::PerfectPowers: return "powers(d=" + std::to_string(d_) + ")";
        case Variant::Primes: return "primes";
        case Variant::Custom: return "custom(n=" + std::to_string(table_.size()) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------

IntegerSet sample_set(const MeanSchedule& schedule, const BaseSequence& base,
                      std::int64_t count, std::uint64_t seed) {
    if (count < 1) throw InvalidInput("sample_set: count must be >= 1");
    IntegerSet lambda0 = base.first(count);
    CounterRng rng{seed};
    std::vector<std::int64_t> out;
    for (std::int64_t j = 1; j <= count; ++j)
        if (rng.uniform(static_cast<std::uint64_t>(j)) < schedule.mean_at(j))
            out.push_back(lambda0[static_cast<std::size_t>(j - 1)]);
    return IntegerSet(std::move(out));
}

RegularityReport regularity_report(const BaseSequence& base,
                                   const std::function<double(double)>& phi,
                                   const std::vector<std::int64_t>& grid) {
    if (grid.empty()) throw InvalidInput("regularity_report: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw InvalidInput("regularity_report: grid must increase");

    RegularityReport rep;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::int64_t N : grid) {
        RegularityRow row;
        row.N = N;
        double pN = phi(static_cast<double>(N));
        row.ratio_count_over_phi =
            static_cast<double>(base.counting_nu(N, 2 * N)) / pN;
        row.ratio_phi_doubling = phi(2.0 * static_cast<double>(N)) / pN;
        rep.rows.push_back(row);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(row.ratio_count_over_phi - 1));

        double x = std::log(static_cast<double>(N));
        double y = std::log(std::max<double>(1, static_cast<double>(base.counting_nu(1, N + 1))));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    auto m = static_cast<double>(grid.size());
    rep.fitted_d = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.fitted_a = std::exp((sy - rep.fitted_d * sx) / m);
    double ss = 0;
    for (std::int64_t N : grid) {
        double x = std::log(static_cast<double>(N));
        double y = std::log(std::max<double>(1, static_cast<double>(base.counting_nu(1, N + 1))));
        double r = y - (std::log(rep.fitted_a) + rep.fitted_d * x);
        ss += r * r;
    }
    rep.fit_residual = std::sqrt(ss / m);

    // λ_{8n} >= 2·λ_n over all indices reachable below the top of the grid
    std::int64_t K = base.counting_nu(1, grid.back() + 1);
    if (K >= 8) {
        IntegerSet elems = base.first(K);
        for (std::int64_t n = 1; 8 * n <= K; ++n) {
            if (elems[static_cast<std::size_t>(8 * n - 1)] < 2 * elems[static_cast<std::size_t>(n - 1)]) {
                rep.doubling_holds = false;
                rep.doubling_first_failure = n;
                break;
            }
        }
    }
    return rep;
}

}  // namespace lacuna
