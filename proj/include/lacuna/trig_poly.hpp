#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "lacuna/integer_set.hpp"

namespace lacuna {

// Sparse trigonometric polynomial f(t) = Σ_n c_n e^{int}.  Frequencies may be
// negative; zero coefficients are never stored.
class TrigPolynomial {
public:
    using Coeffs = std::map<std::int64_t, std::complex<double>>;

    TrigPolynomial() = default;

    static TrigPolynomial exponential(std::int64_t n);           // e_n
    static TrigPolynomial constant(std::complex<double> c);
    static TrigPolynomial from_set(const IntegerSet& A);         // Σ_{n∈A} e_n

    std::complex<double> coeff(std::int64_t n) const;
    void set_coeff(std::int64_t n, std::complex<double> c);

    const Coeffs& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }
    std::size_t term_count() const { return coeffs_.size(); }

    // max |n| over the spectrum; 0 for the zero polynomial
    std::int64_t degree() const;

    // real-valued iff c_{-n} = conj(c_n) throughout
    bool is_real(double tol = 1e-12) const;

    // sqrt(Σ|c_n|²); equals ‖f‖₂ by Parseval
    double l2_coeff_norm() const;

    std::complex<double> evaluate(double t) const;

    TrigPolynomial& operator+=(const TrigPolynomial& g);
    TrigPolynomial& operator-=(const TrigPolynomial& g);
    TrigPolynomial& operator*=(double s);
    friend TrigPolynomial operator+(TrigPolynomial f, const TrigPolynomial& g) { return f += g; }
    friend TrigPolynomial operator-(TrigPolynomial f, const TrigPolynomial& g) { return f -= g; }
    friend TrigPolynomial operator*(double s, TrigPolynomial f) { return f *= s; }

    // convolution of coefficients = pointwise product of functions
    friend TrigPolynomial operator*(const TrigPolynomial& f, const TrigPolynomial& g);

private:
    Coeffs coeffs_;
};

// Values f(2πj/G) for j = 0..G-1; G must be a power of two.  Coefficients are
// folded mod G, which is exact as long as G > 2·degree.
std::vector<std::complex<double>> evaluate_grid(const TrigPolynomial& f, std::size_t G);

// In-place radix-2 FFT, X[k] = Σ_j x[j] e^{-2πijk/G}; |x| must be a power of two.
void fft(std::vector<std::complex<double>>& x);

// Σ_{-M <= n <= N} f̂(n) e_n.
TrigPolynomial partial_sum(const TrigPolynomial& f, std::int64_t M, std::int64_t N);

// Grid samples of the dyadic square function (Σ_k |f_k|²)^{1/2}, where the
// blocks are {0}, ±[2^k, 2^{k+1}) with positive and negative blocks separate.
std::vector<double> square_function(const TrigPolynomial& f, std::size_t grid_size);

}  // namespace lacuna
