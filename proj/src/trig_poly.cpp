#include "lacuna/trig_poly.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "lacuna/errors.hpp"

namespace lacuna {

TrigPolynomial TrigPolynomial::exponential(std::int64_t n) {
    TrigPolynomial f;
    f.coeffs_[n] = 1.0;
    return f;
}

TrigPolynomial TrigPolynomial::constant(std::complex<double> c) {
    TrigPolynomial f;
    if (c != 0.0) f.coeffs_[0] = c;
    return f;
}

TrigPolynomial TrigPolynomial::from_set(const IntegerSet& A) {
    TrigPolynomial f;
    for (std::int64_t n : A) f.coeffs_[n] = 1.0;
    return f;
}

std::complex<double> TrigPolynomial::coeff(std::int64_t n) const {
    auto it = coeffs_.find(n);
    return it == coeffs_.end() ? 0.0 : it->second;
}

void TrigPolynomial::set_coeff(std::int64_t n, std::complex<double> c) {
    if (c == 0.0)
        coeffs_.erase(n);
    else
        coeffs_[n] = c;
}

std::int64_t TrigPolynomial::degree() const {
    std::int64_t d = 0;
    if (!coeffs_.empty()) {
        d = std::max(std::abs(coeffs_.begin()->first), std::abs(coeffs_.rbegin()->first));
    }
    return d;
}

bool TrigPolynomial::is_real(double tol) const {
    for (const auto& [n, c] : coeffs_)
        if (std::abs(c - std::conj(coeff(-n))) > tol) return false;
    return true;
}

double TrigPolynomial::l2_coeff_norm() const {
    double s = 0;
    for (const auto& [n, c] : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

std::complex<double> TrigPolynomial::evaluate(double t) const {
    std::complex<double> v = 0;
    for (const auto& [n, c] : coeffs_)
        v += c * std::polar(1.0, static_cast<double>(n) * t);
    return v;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& g) {
    for (const auto& [n, c] : g.coeffs_) set_coeff(n, coeff(n) + c);
    return *this;
}

TrigPolynomial& TrigPolynomial::operator-=(const TrigPolynomial& g) {
    for (const auto& [n, c] : g.coeffs_) set_coeff(n, coeff(n) - c);
    return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(double s) {
    if (s == 0.0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [n, c] : coeffs_) c *= s;
    return *this;
}

TrigPolynomial operator*(const TrigPolynomial& f, const TrigPolynomial& g) {
    TrigPolynomial out;
    for (const auto& [n, a] : f.coeffs_)
        for (const auto& [m, b] : g.coeffs_) out.set_coeff(n + m, out.coeff(n + m) + a * b);
    return out;
}

void fft(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0) throw InvalidInput("fft size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2 * std::numbers::pi / static_cast<double>(len);
        std::complex<double> wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w = 1.0;
            for (std::size_t j = 0; j < len / 2; ++j) {
                auto u = x[i + j], v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<std::complex<double>> evaluate_grid(const TrigPolynomial& f, std::size_t G) {
    if (G == 0 || (G & (G - 1)) != 0) throw InvalidInput("grid size must be a power of two");
    std::vector<std::complex<double>> a(G, 0.0);
    for (const auto& [n, c] : f.coeffs()) {
        auto m = n % static_cast<std::int64_t>(G);
        if (m < 0) m += static_cast<std::int64_t>(G);
        a[static_cast<std::size_t>(m)] += c;
    }
    // f(2πj/G) is the inverse transform of the folded coefficients
    for (auto& v : a) v = std::conj(v);
    fft(a);
    for (auto& v : a) v = std::conj(v);
    return a;
}

TrigPolynomial partial_sum(const TrigPolynomial& f, std::int64_t M, std::int64_t N) {
    TrigPolynomial out;
    for (const auto& [n, c] : f.coeffs())
        if (n >= -M && n <= N) out.set_coeff(n, c);
    return out;
}

std::vector<double> square_function(const TrigPolynomial& f, std::size_t grid_size) {
    // block key: 0 for frequency 0, ±(k+1) for ±[2^k, 2^{k+1})
    std::map<std::int64_t, TrigPolynomial> blocks;
    for (const auto& [n, c] : f.coeffs()) {
        std::int64_t key = 0;
        if (n > 0) key = std::bit_width(static_cast<std::uint64_t>(n));
        if (n < 0) key = -static_cast<std::int64_t>(std::bit_width(static_cast<std::uint64_t>(-n)));
        blocks[key].set_coeff(n, c);
    }
    std::vector<double> out(grid_size, 0.0);
    for (const auto& [key, g] : blocks) {
        auto vals = evaluate_grid(g, grid_size);
        for (std::size_t j = 0; j < grid_size; ++j) out[j] += std::norm(vals[j]);
    }
    for (auto& v : out) v = std::sqrt(v);
    return out;
}

}  // namespace lacuna
