#pragma once

// Exact arithmetic in Q(zeta_M), power basis modulo the M-th cyclotomic polynomial.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "classinv/arith.hpp"
#include "classinv/error.hpp"
#include "classinv/numeric.hpp"

namespace classinv {

/// Per-modulus data: Phi_M, the reduction table x^k mod Phi_M and cached complex roots.
class CycloContext {
 public:
  explicit CycloContext(i64 M) : M_(M) {
    require(M >= 1, "CycloContext: modulus must be positive");
    phi_poly_ = cyclotomic_poly(M);
    phi_ = static_cast<int>(phi_poly_.size()) - 1;
    build_table();
  }

  i64 modulus() const { return M_; }
  int phi() const { return phi_; }
  const std::vector<i64>& phi_poly() const { return phi_poly_; }

  /// x^k mod Phi_M as sparse (index, coefficient), any k >= 0 (reduced mod M first).
  const std::vector<std::pair<int, i64>>& power(i64 k) const {
    if (k >= static_cast<i64>(table_.size())) k = mod(k, M_);
    return table_[static_cast<std::size_t>(k)];
  }
  std::size_t table_size() const { return table_.size(); }

  /// zeta^k for k in [0, M) at `digits` decimal digits (cached).
  const std::vector<Complex>& roots(int digits) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = roots_.find(digits);
    if (it != roots_.end()) return it->second;
    PrecisionScope ps(static_cast<unsigned>(digits));
    std::vector<Complex> r;
    r.reserve(static_cast<std::size_t>(M_));
    for (i64 k = 0; k < M_; ++k) r.push_back(root_of_unity_value(k, M_));
    return roots_.emplace(digits, std::move(r)).first->second;
  }

  /// Integer coefficients of Phi_n, low degree first.
  static std::vector<i64> cyclotomic_poly(i64 n) {
    // x^n - 1 divided by Phi_d for every proper divisor d
    std::vector<i64> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = -1;
    p[static_cast<std::size_t>(n)] = 1;
    for (i64 d = 1; d < n; ++d) {
      if (n % d) continue;
      p = exact_div(p, cyclotomic_poly(d));
    }
    return p;
  }

 private:
  static std::vector<i64> exact_div(std::vector<i64> a, const std::vector<i64>& b) {
    // b is monic
    const std::size_t db = b.size() - 1;
    std::vector<i64> q(a.size() - db, 0);
    for (std::size_t i = a.size(); i-- > db;) {
      i64 c = a[i];
      q[i - db] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    for (std::size_t i = 0; i < db; ++i)
      if (a[i] != 0) fail(ErrorKind::Verification, "cyclotomic_poly: inexact division");
    return q;
  }

  void build_table() {
    const std::size_t n = static_cast<std::size_t>(std::max<i64>(M_, 2 * phi_));
    table_.resize(n);
    std::vector<i64> cur(static_cast<std::size_t>(phi_), 0);
    if (phi_ > 0) cur[0] = 1;
    for (std::size_t k = 0; k < n; ++k) {
      auto& row = table_[k];
      for (int i = 0; i < phi_; ++i)
        if (cur[static_cast<std::size_t>(i)] != 0) row.emplace_back(i, cur[static_cast<std::size_t>(i)]);
      // multiply by x and reduce
      i64 top = phi_ > 0 ? cur[static_cast<std::size_t>(phi_ - 1)] : 0;
      for (int i = phi_ - 1; i > 0; --i) cur[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i - 1)];
      if (phi_ > 0) cur[0] = 0;
      for (int i = 0; i < phi_; ++i) cur[static_cast<std::size_t>(i)] -= top * phi_poly_[static_cast<std::size_t>(i)];
    }
  }

  i64 M_;
  int phi_ = 0;
  std::vector<i64> phi_poly_;
  std::vector<std::vector<std::pair<int, i64>>> table_;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<Complex>> roots_;
};

inline std::shared_ptr<const CycloContext> cyclo_context(i64 M) {
  static std::mutex mu;
  static std::map<i64, std::shared_ptr<const CycloContext>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  auto ctx = std::make_shared<const CycloContext>(M);
  cache.emplace(M, ctx);
  return ctx;
}

/// Element of Q(zeta_M): (num_0 + num_1 x + ... ) / den, den > 0, content-reduced.
class CycloNum {
 public:
  CycloNum() : CycloNum(1) {}
  explicit CycloNum(i64 M) : ctx_(cyclo_context(M)), num_(static_cast<std::size_t>(ctx_->phi())), den_(1) {}
  CycloNum(i64 M, const mpq_class& v) : CycloNum(M) {
    num_[0] = v.get_num();
    den_ = v.get_den();
  }
  CycloNum(i64 M, long v) : CycloNum(M, mpq_class(v)) {}

  static CycloNum zero(i64 M) { return CycloNum(M); }
  static CycloNum one(i64 M) { return CycloNum(M, 1L); }
  static CycloNum root(i64 M, i64 k) {
    CycloNum r(M);
    for (auto [i, c] : r.ctx_->power(mod(k, M))) r.num_[static_cast<std::size_t>(i)] = c;
    return r;
  }
  /// sum_k c_k zeta^k for arbitrary integer exponents k.
  static CycloNum from_exponents(i64 M, const std::map<i64, mpq_class>& terms) {
    CycloNum r(M);
    mpz_class den = 1;
    for (const auto& [k, c] : terms) den = lcm(den, mpz_class(c.get_den()));
    for (const auto& [k, c] : terms) {
      mpz_class s = c.get_num() * (den / c.get_den());
      for (auto [i, t] : r.ctx_->power(mod(k, M))) r.num_[static_cast<std::size_t>(i)] += s * t;
    }
    r.den_ = den;
    r.normalize();
    return r;
  }
  /// From power-basis rational coordinates (length phi(M)).
  static CycloNum from_coords(i64 M, const std::vector<mpq_class>& coords) {
    std::map<i64, mpq_class> t;
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] != 0) t[static_cast<i64>(i)] = coords[i];
    return from_exponents(M, t);
  }

  i64 modulus() const { return ctx_->modulus(); }
  int phi() const { return ctx_->phi(); }
  const CycloContext& context() const { return *ctx_; }
  const std::vector<mpz_class>& numerators() const { return num_; }
  const mpz_class& denominator() const { return den_; }

  mpq_class coeff(int i) const {
    mpq_class q(num_[static_cast<std::size_t>(i)], den_);
    q.canonicalize();
    return q;
  }
  std::vector<mpq_class> coords() const {
    std::vector<mpq_class> out;
    out.reserve(num_.size());
    for (int i = 0; i < phi(); ++i) out.push_back(coeff(i));
    return out;
  }

  bool is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const mpz_class& z) { return z == 0; });
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < num_.size(); ++i)
      if (num_[i] != 0) return false;
    return true;
  }
  mpq_class rational_value() const {
    require(is_rational(), "CycloNum: not rational");
    return coeff(0);
  }
  bool is_integral() const { return den_ == 1; }

  friend bool operator==(const CycloNum& a, const CycloNum& b) {
    return a.modulus() == b.modulus() && a.den_ == b.den_ && a.num_ == b.num_;
  }
  friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

  CycloNum& operator+=(const CycloNum& o) {
    check_same(o);
    if (den_ == o.den_) {
      for (std::size_t i = 0; i < num_.size(); ++i) num_[i] += o.num_[i];
    } else {
      mpz_class l = lcm(den_, o.den_);
      mpz_class fa = l / den_, fb = l / o.den_;
      for (std::size_t i = 0; i < num_.size(); ++i) num_[i] = num_[i] * fa + o.num_[i] * fb;
      den_ = l;
    }
    normalize();
    return *this;
  }
  CycloNum& operator-=(const CycloNum& o) { return *this += -o; }
  CycloNum operator-() const {
    CycloNum r = *this;
    for (auto& z : r.num_) z = -z;
    return r;
  }
  friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
  friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }

  friend CycloNum operator*(const CycloNum& a, const CycloNum& b) {
    a.check_same(b);
    const auto& ctx = *a.ctx_;
    const int n = ctx.phi();
    std::vector<int> ia, ib;
    for (int i = 0; i < n; ++i)
      if (a.num_[static_cast<std::size_t>(i)] != 0) ia.push_back(i);
    for (int i = 0; i < n; ++i)
      if (b.num_[static_cast<std::size_t>(i)] != 0) ib.push_back(i);
    CycloNum r(a.modulus());
    if (ia.empty() || ib.empty()) return r;
    std::vector<mpz_class> acc(static_cast<std::size_t>(2 * n));
    for (int i : ia)
      for (int j : ib) acc[static_cast<std::size_t>(i + j)] += a.num_[static_cast<std::size_t>(i)] * b.num_[static_cast<std::size_t>(j)];
    for (int k = 0; k < 2 * n - 1; ++k) {
      const auto& z = acc[static_cast<std::size_t>(k)];
      if (z == 0) continue;
      if (k < n) {
        r.num_[static_cast<std::size_t>(k)] += z;
      } else {
        for (auto [i, c] : ctx.power(k)) r.num_[static_cast<std::size_t>(i)] += z * c;
      }
    }
    r.den_ = a.den_ * b.den_;
    r.normalize();
    return r;
  }
  CycloNum& operator*=(const CycloNum& o) { return *this = *this * o; }

  CycloNum scaled(const mpq_class& q) const {
    CycloNum r = *this;
    for (auto& z : r.num_) z *= q.get_num();
    r.den_ *= q.get_den();
    r.normalize();
    return r;
  }

  /// zeta^k * x
  CycloNum mul_root(i64 k) const { return galois_shift(1, k); }

  /// sigma_d(x) * zeta^k, d a unit.
  CycloNum galois_shift(i64 d, i64 k) const {
    const i64 M = modulus();
    require(is_unit(d, M), "galois: d is not a unit mod M");
    CycloNum r(M);
    for (int i = 0; i < phi(); ++i) {
      const auto& z = num_[static_cast<std::size_t>(i)];
      if (z == 0) continue;
      for (auto [j, c] : ctx_->power(mod(d * i + k, M))) r.num_[static_cast<std::size_t>(j)] += z * c;
    }
    r.den_ = den_;
    r.normalize();
    return r;
  }

  CycloNum galois(i64 d) const { return galois_shift(d, 0); }
  CycloNum conj() const { return galois(-1); }

  /// Multiplicative inverse by extended Euclid against Phi_M over Q[x].
  CycloNum inv() const {
    if (is_zero()) fail(ErrorKind::BadInput, "CycloNum: division by zero");
    using Poly = std::vector<mpq_class>;
    auto trim = [](Poly& p) {
      while (!p.empty() && p.back() == 0) p.pop_back();
    };
    // invariant: s_i * x ≡ r_i (mod Phi)
    Poly r0, r1, s0, s1{mpq_class(1)};
    for (i64 c : ctx_->phi_poly()) r0.emplace_back(c);
    for (int i = 0; i < phi(); ++i) r1.push_back(coeff(i));
    trim(r1);
    while (r1.size() > 1) {
      Poly q(r0.size() - r1.size() + 1);
      Poly r = r0;
      while (r.size() >= r1.size()) {
        mpq_class c = r.back() / r1.back();
        std::size_t sh = r.size() - r1.size();
        q[sh] = c;
        for (std::size_t i = 0; i < r1.size(); ++i) r[i + sh] -= c * r1[i];
        trim(r);
      }
      Poly s = s0;
      if (s.size() < q.size() + s1.size()) s.resize(q.size() + s1.size());
      for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < s1.size(); ++j) s[i + j] -= q[i] * s1[j];
      trim(s);
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    if (r1.empty()) fail(ErrorKind::Verification, "CycloNum::inv: not invertible");
    std::map<i64, mpq_class> t;
    for (std::size_t i = 0; i < s1.size(); ++i)
      if (s1[i] != 0) t[static_cast<i64>(i)] = s1[i] / r1[0];
    return from_exponents(modulus(), t);
  }
  friend CycloNum operator/(const CycloNum& a, const CycloNum& b) { return a * b.inv(); }

  /// Returns k if x = zeta^k.
  std::optional<i64> root_exponent() const {
    if (den_ != 1) return std::nullopt;
    const i64 M = modulus();
    // quick filter on sparsity
    for (i64 k = 0; k < M; ++k) {
      const auto& p = ctx_->power(k);
      bool ok = true;
      std::size_t nz = 0;
      for (const auto& z : num_)
        if (z != 0) ++nz;
      if (nz != p.size()) continue;
      for (auto [i, c] : p)
        if (num_[static_cast<std::size_t>(i)] != c) {
          ok = false;
          break;
        }
      if (ok) return k;
    }
    return std::nullopt;
  }

  /// Value at zeta = e^{2 pi i / M}.
  Complex embed(int digits) const { return embed_at(1, digits); }

  /// Value at zeta = e^{2 pi i d / M}, i.e. embed(galois(d, x)).
  Complex embed_at(i64 d, int digits) const {
    const auto& r = ctx_->roots(digits);
    PrecisionScope ps(static_cast<unsigned>(digits));
    Complex s;
    const i64 M = modulus();
    for (int i = 0; i < phi(); ++i) {
      const auto& z = num_[static_cast<std::size_t>(i)];
      if (z == 0) continue;
      s += r[static_cast<std::size_t>(mod(d * i, M))] * Complex(to_real(z));
    }
    return s / Complex(to_real(den_));
  }

  /// Re-expresses x in Q(zeta_{M'}) for a multiple M' of M.
  CycloNum lift(i64 Mp) const {
    const i64 M = modulus();
    require(Mp % M == 0, "CycloNum::lift: target is not a multiple");
    std::map<i64, mpq_class> t;
    for (int i = 0; i < phi(); ++i)
      if (num_[static_cast<std::size_t>(i)] != 0) t[i * (Mp / M)] = mpq_class(num_[static_cast<std::size_t>(i)], den_);
    for (auto& [k, v] : t) v.canonicalize();
    return from_exponents(Mp, t);
  }

  /// Text form in descending powers, e.g. "-12*z^18 + 12*z^6".
  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = phi() - 1; i >= 0; --i) {
      mpq_class c = coeff(i);
      if (c == 0) continue;
      bool neg = c < 0;
      mpq_class a = neg ? mpq_class(-c) : c;
      if (first) {
        if (neg) os << "-";
      } else {
        os << (neg ? " - " : " + ");
      }
      first = false;
      if (i == 0) {
        os << a.get_str();
      } else {
        if (a != 1) os << a.get_str() << "*";
        os << "z";
        if (i != 1) os << "^" << i;
      }
    }
    if (first) os << "0";
    return os.str();
  }

  /// Parses sums of terms like "-12z^18", "3/2*z^5", "z", "7"; exponents may exceed phi(M).
  static CycloNum parse(i64 M, const std::string& text) {
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) fail(ErrorKind::BadInput, "CycloNum::parse: empty");
    if (s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    static const std::regex term(R"(([+-]?)(\d+(?:/\d+)?)?\*?(z(?:\^\{?(\d+)\}?)?)?)");
    std::map<i64, mpq_class> t;
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::smatch m;
      std::string rest = s.substr(pos);
      if (!std::regex_search(rest, m, term, std::regex_constants::match_continuous) || m.length(0) == 0)
        fail(ErrorKind::BadInput, "CycloNum::parse: cannot read '" + rest + "'");
      if (!m[2].matched && !m[3].matched) fail(ErrorKind::BadInput, "CycloNum::parse: empty term in '" + text + "'");
      mpq_class c = m[2].matched ? mpq_class(m[2].str()) : mpq_class(1);
      c.canonicalize();
      if (m[1].str() == "-") c = -c;
      i64 e = 0;
      if (m[3].matched) e = m[4].matched ? std::stoll(m[4].str()) : 1;
      t[e] += c;
      pos += static_cast<std::size_t>(m.length(0));
    }
    return from_exponents(M, t);
  }

 private:
  void check_same(const CycloNum& o) const {
    if (modulus() != o.modulus()) fail(ErrorKind::BadInput, "CycloNum: modulus mismatch");
  }

  void normalize() {
    mpz_class g = den_;
    for (const auto& z : num_) {
      if (g == 1) break;
      if (z != 0) g = gcd(g, z);
    }
    if (g != 1) {
      for (auto& z : num_) z /= g;
      den_ /= g;
    }
    if (den_ < 0) {
      den_ = -den_;
      for (auto& z : num_) z = -z;
    }
    if (is_zero()) den_ = 1;
  }

  std::shared_ptr<const CycloContext> ctx_;
  std::vector<mpz_class> num_;
  mpz_class den_;
};

/// Square root of an odd prime p inside Q(zeta_M), 4p | M, from the quadratic Gauss sum.
inline CycloNum sqrt_gauss(i64 p, i64 M) {
  require(p > 2 && is_prime(p), "sqrt_gauss: p must be an odd prime");
  require(M % (4 * p) == 0, "sqrt_gauss: 4p must divide M");
  std::map<i64, mpq_class> t;
  for (i64 k = 1; k < p; ++k) t[k * (M / p)] = legendre(k, p);
  CycloNum g = CycloNum::from_exponents(M, t);  // sqrt(p) or i*sqrt(p)
  if (p % 4 == 3) g = g.mul_root(-M / 4);       // times -i
  if (g * g != CycloNum(M, static_cast<long>(p))) fail(ErrorKind::Verification, "sqrt_gauss: square check failed");
  return g;
}

/// Accumulates sum c_k zeta^k over exponents mod M before a single reduction.
class RootAccumulator {
 public:
  explicit RootAccumulator(i64 M) : M_(M), acc_(static_cast<std::size_t>(M)) {}
  void add(i64 k, const mpq_class& c) { acc_[static_cast<std::size_t>(mod(k, M_))] += c; }
  void add(const CycloNum& x, i64 d = 1, i64 shift = 0) {
    // adds sigma_d(x) zeta^shift without reducing
    for (int i = 0; i < x.phi(); ++i) {
      const auto& z = x.numerators()[static_cast<std::size_t>(i)];
      if (z == 0) continue;
      mpq_class c(z, x.denominator());
      c.canonicalize();
      acc_[static_cast<std::size_t>(mod(d * i + shift, M_))] += c;
    }
  }
  CycloNum value() const {
    std::map<i64, mpq_class> t;
    for (i64 k = 0; k < M_; ++k) {
      const mpq_class& c = acc_[static_cast<std::size_t>(k)];
      if (c != 0) t[k] = c;
    }
    return CycloNum::from_exponents(M_, t);
  }

 private:
  i64 M_;
  std::vector<mpq_class> acc_;
};

}  // namespace classinv
