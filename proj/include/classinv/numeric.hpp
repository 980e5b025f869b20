#pragma once

// Multiprecision complex numbers, Dedekind eta products and the eta multiplier.

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <cmath>
#include <string>

#include "classinv/arith.hpp"
#include "classinv/error.hpp"

namespace classinv {

using Real = boost::multiprecision::mpfr_float;

/// Sets the default mpfr precision (decimal digits) for the current scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits) : saved_(Real::default_precision()) { Real::default_precision(digits); }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

inline Real to_real(const mpq_class& q) {
  Real n(q.get_num().get_str());
  Real d(q.get_den().get_str());
  return n / d;
}

inline Real to_real(const mpz_class& z) { return Real(z.get_str()); }

struct Complex {
  Real re{0};
  Real im{0};

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(int r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)

  static Complex i() { return {Real(0), Real(1)}; }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    Real n = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / n;
    im = (im * o.re - re * o.im) / n;
    re = std::move(r);
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  Complex operator-() const { return {-re, -im}; }

  Complex conj() const { return {re, -im}; }
  Real norm() const { return re * re + im * im; }
  Real abs() const { return boost::multiprecision::sqrt(norm()); }

  std::string str(int digits = 20) const {
    std::string s = re.str(digits);
    if (im >= 0) s += "+";
    return s + im.str(digits) + "i";
  }
};

inline Real real_pi() { return boost::math::constants::pi<Real>(); }

/// e^{i t}
inline Complex exp_i(const Real& t) { return {boost::multiprecision::cos(t), boost::multiprecision::sin(t)}; }

inline Complex cexp(const Complex& z) {
  Real m = boost::multiprecision::exp(z.re);
  return {m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im)};
}

/// Principal square root.
inline Complex csqrt(const Complex& z) {
  Real r = z.abs();
  Real a = boost::multiprecision::sqrt((r + z.re) / 2);
  Real b = boost::multiprecision::sqrt((r - z.re) / 2);
  if (z.im < 0) b = -b;
  return {a, b};
}

/// exp(2 pi i k / m)
inline Complex root_of_unity_value(i64 k, i64 m) {
  return exp_i(2 * real_pi() * Real(mod(k, m)) / Real(m));
}

inline Real epsilon_digits(int digits) { return boost::multiprecision::pow(Real(10), -digits); }

/// Dedekind eta by the raw product e^{2 pi i tau/24} prod (1 - q^n), to about `digits` digits.
inline Complex eta(const Complex& tau, int digits) {
  require(tau.im > 0, "eta: tau must lie in the upper half plane");
  const Complex two_pi_i_tau = Complex(Real(0), 2 * real_pi()) * tau;
  const Complex q = cexp(two_pi_i_tau);
  const Real qa = q.abs();
  const Real eps = epsilon_digits(digits + 5);
  // number of factors so that |q|^n < eps
  const double needed = static_cast<double>(boost::multiprecision::log(eps) / boost::multiprecision::log(qa));
  if (!(needed < 2e6)) fail(ErrorKind::Precision, "eta: |q| too close to 1 for the raw product");
  Complex prod(1);
  Complex qn = q;
  const auto n_max = static_cast<long>(needed) + 2;
  for (long n = 1; n <= n_max; ++n) {
    prod *= Complex(1) - qn;
    qn *= q;
  }
  return cexp(two_pi_i_tau / Complex(Real(24))) * prod;
}

/// Dedekind sum s(h, k) for k >= 1, exact.
inline mpq_class dedekind_sum(i64 h, i64 k) {
  require(k >= 1, "dedekind_sum: k must be positive");
  mpq_class s = 0;
  for (i64 r = 1; r < k; ++r) {
    i64 hr = mod(h * r, k);
    if (hr == 0) continue;
    s += (mpq_class(r, k) - mpq_class(1, 2)) * (mpq_class(hr, k) - mpq_class(1, 2));
  }
  s.canonicalize();
  return s;
}

/// Exponent e mod 24 with eta(g tau) = zeta_24^e sqrt(-i(c tau + d)) eta(tau), g = (a b; c d) in SL(2,Z), c > 0.
inline i64 eta_multiplier24(i64 a, i64 b, i64 c, i64 d) {
  require(a * d - b * c == 1, "eta_multiplier24: matrix not in SL(2,Z)");
  require(c > 0, "eta_multiplier24: needs c > 0");
  // eps = exp(pi i ((a+d)/(12c) - s(d,c)))
  mpq_class ex = mpq_class(a + d, 12 * c) - dedekind_sum(d, c);
  ex.canonicalize();
  mpq_class e = ex * 12;
  e.canonicalize();
  if (e.get_den() != 1) fail(ErrorKind::Verification, "eta_multiplier24: non-integral exponent");
  return mod(e.get_num().get_si(), 24);
}

}  // namespace classinv
