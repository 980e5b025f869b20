#pragma once

// CM values of class invariants over the class group and class polynomials recognized in Z[theta].

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "classinv/descent.hpp"

namespace classinv {

struct QuadraticForm {
  i64 a = 0, b = 0, c = 0;
  i64 disc() const { return b * b - 4 * a * c; }
  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;
  friend auto operator<=>(const QuadraticForm&, const QuadraticForm&) = default;
  std::string to_string() const { return "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]"; }
};

/// Reduced primitive forms of discriminant D, sorted by (a, b).
inline std::vector<QuadraticForm> reduced_forms(i64 D) {
  if (D >= 0 || (mod(D, 4) != 0 && mod(D, 4) != 1)) fail(ErrorKind::BadInput, "reduced_forms: bad discriminant " + std::to_string(D));
  std::vector<QuadraticForm> out;
  for (i64 a = 1; 3 * a * a <= -D; ++a)
    for (i64 b = -a + 1; b <= a; ++b) {
      if ((b * b - D) % (4 * a) != 0) continue;
      const i64 c = (b * b - D) / (4 * a);
      if (c < a || (b < 0 && a == c)) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      out.push_back({a, b, c});
    }
  return out;
}

inline std::size_t class_number(i64 D) { return reduced_forms(D).size(); }

/// An equivalent form [A, B, C] with gcd(A, M) = 1 and -A < B <= A, using the smallest such A.
inline QuadraticForm coprime_representative(const QuadraticForm& f, i64 M) {
  std::optional<std::tuple<i64, i64, i64>> best;
  for (i64 r = 4; !best && r <= 256; r *= 2)
    for (i64 x = -r; x <= r; ++x)
      for (i64 y = -r; y <= r; ++y) {
        if (std::gcd(x, y) != 1) continue;
        const i64 v = f.a * x * x + f.b * x * y + f.c * y * y;
        if (v > 0 && std::gcd(v, M) == 1 && (!best || v < std::get<0>(*best))) best = std::make_tuple(v, x, y);
      }
  if (!best) fail(ErrorKind::Verification, "no form in the class of " + f.to_string() + " has a first coefficient prime to the level");
  auto [A, x, y] = *best;
  auto [g, u, w] = ext_gcd(x, y);  // u x + w y = 1
  (void)g;
  const i64 z = -w;  // x*u - y*z = 1 with (x z; y u) in SL(2,Z)
  i64 B = 2 * f.a * x * z + f.b * (x * u + y * z) + 2 * f.c * y * u;
  B = A - mod(A - B, 2 * A);  // translate into (-A, A]
  const i64 D = f.disc();
  const i64 C = (B * B - D) / (4 * A);
  return {A, B, C};
}

/// Sum of coefficient * product of basis values, at the current precision.
inline Complex eval_on_values(const InvariantPolynomial& p, const std::vector<Complex>& vals, int digits) {
  Complex s;
  for (const auto& [m, c] : p.terms()) {
    Complex t = c.embed(digits + 10);
    for (int i : m) t *= vals[static_cast<std::size_t>(i)];
    s += t;
  }
  return s;
}

inline Complex eval_invariant(const InvariantPolynomial& p, const FunctionBasis& fb, const Complex& tau, int digits) {
  if (p.is_zero()) return {};
  PrecisionScope ps(static_cast<unsigned>(digits + 20));
  return eval_on_values(p, fb.evaluate(tau, digits + 10), digits);
}

/// Default working precision in decimal digits; CLASSINV_DIGITS overrides it when set.
inline int default_digits(i64 D) {
  if (const char* env = std::getenv("CLASSINV_DIGITS")) {
    try {
      const int d = std::stoi(env);
      if (d >= 30) return d;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::BadInput, "CLASSINV_DIGITS must be an integer >= 30");
  }
  const double h = static_cast<double>(class_number(D));
  return std::max(150, static_cast<int>(15 * h + 10 * std::sqrt(static_cast<double>(-D))));
}

struct ConjugateValue {
  QuadraticForm reduced, representative;
  ResidueMatrix u;
  Complex value;
};

/// Values of w o u_Q at tau_Q = (-b + sqrt D)/(2a) for every class, u_Q = (a, (b-B)/2; 0, 1).
inline std::vector<ConjugateValue> conjugate_values(const InvariantPolynomial& w, const FunctionBasis& fb, const OrderContext& ctx, int digits) {
  require(fb.level() == ctx.M, "conjugate_values: basis level differs from the context level");
  PrecisionScope ps(static_cast<unsigned>(digits + 20));
  MonomialBasis mb(fb.size(), w.degree());
  const CycloVec coords = w.coords(mb);
  std::vector<ConjugateValue> out;
  for (const auto& f : reduced_forms(ctx.D)) {
    ConjugateValue cv;
    cv.reduced = f;
    cv.representative = coprime_representative(f, ctx.M);
    const auto& q = cv.representative;
    if (mod(q.b - ctx.B, 2) != 0) fail(ErrorKind::BadInput, "form parity does not match B");
    cv.u = ResidueMatrix(q.a, (q.b - ctx.B) / 2, 0, 1, ctx.M);
    const Complex tau{Real(-q.b) / Real(2 * q.a), boost::multiprecision::sqrt(Real(-ctx.D)) / Real(2 * q.a)};
    const CycloVec moved = act(sym_power(fb.action_of(cv.u), mb), cv.u.det(), coords);
    cv.value = eval_on_values(InvariantPolynomial::from_coords(fb, mb, moved), fb.evaluate(tau, digits + 10), digits);
    out.push_back(std::move(cv));
  }
  return out;
}

/// Monic polynomial coefficients (low degree first) from its roots.
inline std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{Complex(1)};
  for (const auto& r : roots) {
    std::vector<Complex> next(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * r;
    }
    c = std::move(next);
  }
  return c;
}

inline mpz_class round_to_mpz(const Real& x) {
  std::string s = Real(boost::multiprecision::round(x)).str(0, std::ios_base::fixed);
  if (auto dot = s.find('.'); dot != std::string::npos) s.resize(dot);
  if (s == "-0") s = "0";
  return mpz_class(s);
}

/// u + v*theta with theta = (-B + sqrt D)/2.
struct OElement {
  mpz_class u, v;
  friend bool operator==(const OElement&, const OElement&) = default;
};

struct ClassPolynomial {
  i64 D = 0, B = 0;
  /// Low degree first, monic.
  std::vector<OElement> coeffs;
  int digits = 0;
  Real residual = 0;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  bool is_rational() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const OElement& e) { return e.v == 0; });
  }
  friend bool operator==(const ClassPolynomial& a, const ClassPolynomial& b) { return a.D == b.D && a.B == b.B && a.coeffs == b.coeffs; }

  /// u + v theta = X + Y sqrt(D) with X = u - vB/2, Y = v/2.
  static std::string coeff_text(const OElement& e, i64 B, i64 D, bool& negative) {
    mpq_class X(e.u * 2 - e.v * B, 2), Y(e.v, 2);
    X.canonicalize();
    Y.canonicalize();
    negative = false;
    if (Y == 0) {
      negative = X < 0;
      return mpq_class(abs(X)).get_str();
    }
    std::string s = "(";
    if (X != 0) s += X.get_str();
    if (Y < 0) s += "-";
    else if (X != 0) s += "+";
    if (abs(Y) != 1) s += mpq_class(abs(Y)).get_str() + "*";
    s += "sqrt(" + std::to_string(D) + "))";
    return s;
  }

  /// `t^2 + (420-8*sqrt(-91))*t - 20048`
  std::string to_string() const {
    std::ostringstream os;
    const std::size_t h = degree();
    os << (h == 1 ? std::string("t") : "t^" + std::to_string(h));
    for (std::size_t k = h; k-- > 0;) {
      const OElement& e = coeffs[k];
      if (e.u == 0 && e.v == 0) continue;
      bool neg = false;
      std::string c = coeff_text(e, B, D, neg);
      os << (neg ? " - " : " + ");
      const bool unit = c == "1";
      if (k == 0) {
        os << c;
      } else {
        if (!unit) os << c << "*";
        os << (k == 1 ? std::string("t") : "t^" + std::to_string(k));
      }
    }
    return os.str();
  }

  static ClassPolynomial parse(i64 D, i64 B, const std::string& text) {
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    ClassPolynomial p;
    p.D = D;
    p.B = B;
    std::map<std::size_t, OElement> terms;
    int depth = 0, sign = 1;
    std::string cur;
    auto flush = [&]() {
      if (cur.empty()) return;
      static const std::regex term(R"(^(?:(\d+(?:/\d+)?|\([^)]*\)\)?)\*?)?(t(?:\^(\d+))?)?$)");
      std::smatch m;
      if (!std::regex_match(cur, m, term) || (!m[1].matched && !m[2].matched)) fail(ErrorKind::BadInput, "cannot parse term '" + cur + "'");
      const std::size_t k = m[2].matched ? (m[3].matched ? std::stoul(m[3].str()) : 1) : 0;
      mpq_class X = 1, Y = 0;
      if (m[1].matched) {
        std::string c = m[1].str();
        if (c.front() == '(') {
          static const std::regex quad(R"(^\(([+-]?\d+(?:/\d+)?)?(?:([+-])(?:(\d+(?:/\d+)?)\*)?sqrt\((-?\d+)\))?\)$)");
          std::smatch q;
          if (!std::regex_match(c, q, quad)) fail(ErrorKind::BadInput, "cannot parse coefficient '" + c + "'");
          X = q[1].matched ? mpq_class(q[1].str()) : mpq_class(0);
          if (q[2].matched) {
            if (std::stoll(q[4].str()) != D) fail(ErrorKind::BadInput, "coefficient uses a different discriminant");
            Y = q[3].matched ? mpq_class(q[3].str()) : mpq_class(1);
            if (q[2].str() == "-") Y = -Y;
          }
        } else {
          X = mpq_class(c);
        }
      }
      X.canonicalize();
      Y.canonicalize();
      X *= sign;
      Y *= sign;
      // v = 2Y, u = X + vB/2
      mpq_class v = 2 * Y, u = X + Y * B;
      u.canonicalize();
      v.canonicalize();
      if (u.get_den() != 1 || v.get_den() != 1) fail(ErrorKind::BadInput, "coefficient is not in Z[theta]");
      auto& slot = terms[k];
      slot.u += u.get_num();
      slot.v += v.get_num();
      cur.clear();
    };
    for (char ch : s) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (depth == 0 && (ch == '+' || ch == '-')) {
        flush();
        sign = ch == '-' ? -1 : 1;
        continue;
      }
      cur += ch;
    }
    flush();
    if (terms.empty()) fail(ErrorKind::BadInput, "empty polynomial");
    const std::size_t h = terms.rbegin()->first;
    p.coeffs.assign(h + 1, OElement{});
    for (const auto& [k, e] : terms) p.coeffs[k] = e;
    if (!(p.coeffs[h] == OElement{1, 0})) fail(ErrorKind::BadInput, "polynomial is not monic");
    return p;
  }

  nlohmann::json to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& e : coeffs) cs.push_back({{"u", e.u.get_str()}, {"v", e.v.get_str()}});
    return {{"discriminant", D}, {"B", B}, {"degree", degree()}, {"text", to_string()}, {"coefficients", cs}, {"digits", digits}};
  }
};

/// Rounds each coefficient to u + v theta; returns the worst distance.
inline ClassPolynomial recognize_in_O(const std::vector<Complex>& coeffs, const OrderContext& ctx, int digits) {
  PrecisionScope ps(static_cast<unsigned>(digits + 20));
  ClassPolynomial p;
  p.D = ctx.D;
  p.B = ctx.B;
  p.digits = digits;
  const Real sq = boost::multiprecision::sqrt(Real(-ctx.D));
  for (const auto& c : coeffs) {
    OElement e;
    e.v = round_to_mpz(2 * c.im / sq);
    const Real vr(e.v.get_str());
    e.u = round_to_mpz(c.re + vr * Real(ctx.B) / 2);
    const Complex rec{Real(e.u.get_str()) - vr * Real(ctx.B) / 2, vr * sq / 2};
    const Real r = (c - rec).abs();
    if (r > p.residual) p.residual = r;
    p.coeffs.push_back(std::move(e));
  }
  return p;
}

/// Class polynomial of a class invariant; retries at doubled precision (at most 3 times).
inline ClassPolynomial class_polynomial_from(const std::function<std::vector<Complex>(int)>& roots, const OrderContext& ctx, int digits) {
  for (int attempt = 0; attempt <= 3; ++attempt, digits *= 2) {
    PrecisionScope ps(static_cast<unsigned>(digits + 20));
    auto p = recognize_in_O(poly_from_roots(roots(digits)), ctx, digits);
    if (p.residual < epsilon_digits(10)) {
      // stricter gate: well inside the working precision relative to the coefficient size
      Real big = 1;
      for (const auto& e : p.coeffs) big = std::max(big, to_real(mpz_class(abs(e.u))) + to_real(mpz_class(abs(e.v))));
      if (p.residual < big * epsilon_digits(digits / 2)) return p;
    }
  }
  fail(ErrorKind::Precision, "class polynomial recognition failed after precision doubling");
}

inline ClassPolynomial class_polynomial(const InvariantPolynomial& w, const FunctionBasis& fb, const OrderContext& ctx, int digits) {
  return class_polynomial_from(
      [&](int d) {
        std::vector<Complex> r;
        for (auto& cv : conjugate_values(w, fb, ctx, d)) r.push_back(cv.value);
        return r;
      },
      ctx, digits);
}

// ---- j-invariant -------------------------------------------------------------

/// Coefficients c(-1), c(0), ... of j = E4^3 / Delta, as integers (index n+1 holds c(n)).
inline std::vector<mpz_class> j_coefficients(std::size_t terms) {
  const std::size_t K = terms + 1;
  std::vector<mpz_class> e4(K), euler(K, 0), inv(K);
  e4[0] = 1;
  for (std::size_t n = 1; n < K; ++n) {
    mpz_class s = 0;
    for (std::size_t d = 1; d <= n; ++d)
      if (n % d == 0) s += mpz_class(static_cast<unsigned long>(d)) * d * d;
    e4[n] = 240 * s;
  }
  auto mul = [K](const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
    std::vector<mpz_class> c(K, 0);
    for (std::size_t i = 0; i < K; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; i + j < K; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  auto e12 = mul(mul(e4, e4), e4);
  // prod (1 - q^n)^24, then its inverse
  std::vector<mpz_class> p(K, 0);
  p[0] = 1;
  for (std::size_t n = 1; n < K; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (std::size_t i = K; i-- > n;) p[i] -= p[i - n];
  inv[0] = 1;
  for (std::size_t n = 1; n < K; ++n) {
    mpz_class s = 0;
    for (std::size_t i = 1; i <= n; ++i) s -= p[i] * inv[n - i];
    inv[n] = s;
  }
  return mul(e12, inv);  // q * j
}

/// j(tau) from its q-expansion, extending the series until the tail is below 10^-digits.
inline Complex j_invariant(const Complex& tau, int digits) {
  require(tau.im > 0, "j_invariant: tau must lie in the upper half plane");
  PrecisionScope ps(static_cast<unsigned>(digits + 20));
  const Complex q = cexp(Complex(Real(0), 2 * real_pi()) * tau);
  const Real eps = epsilon_digits(digits + 10);
  for (std::size_t terms = 64; terms <= 8192; terms *= 2) {
    auto c = j_coefficients(terms);
    Complex s;
    Complex qn = Complex(1) / q;
    Real last = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      Complex t = qn * Complex(Real(c[i].get_str()));
      s += t;
      last = t.abs();
      qn *= q;
    }
    if (last < eps) return s;
  }
  fail(ErrorKind::Precision, "j_invariant: q-series did not converge");
}

/// Hilbert class polynomial from j at the reduced forms.
inline ClassPolynomial hilbert_class_polynomial(const OrderContext& ctx, int digits) {
  return class_polynomial_from(
      [&](int d) {
        PrecisionScope ps(static_cast<unsigned>(d + 20));
        std::vector<Complex> r;
        for (const auto& f : reduced_forms(ctx.D))
          r.push_back(j_invariant({Real(-f.b) / Real(2 * f.a), boost::multiprecision::sqrt(Real(-ctx.D)) / Real(2 * f.a)}, d));
        return r;
      },
      ctx, digits);
}

// ---- realizing a given class polynomial inside a descended span -----------------

/// Best rational approximation with denominator <= max_den, if it is within tol.
inline std::optional<mpq_class> recognize_rational(const Real& x, const mpz_class& max_den, const Real& tol) {
  Real y = x;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 200; ++it) {
    mpz_class a = round_to_mpz(boost::multiprecision::floor(y));
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    const Real approx = Real(p1.get_str()) / Real(q1.get_str());
    if (boost::multiprecision::abs(approx - x) < tol) {
      mpq_class r(p1, q1);
      r.canonicalize();
      return r;
    }
    const Real frac = y - Real(a.get_str());
    if (frac == 0) break;
    y = 1 / frac;
  }
  return std::nullopt;
}

/// Roots of a monic complex polynomial (low degree first) by Durand-Kerner iteration.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& c, int digits) {
  PrecisionScope ps(static_cast<unsigned>(digits + 20));
  const std::size_t n = c.size() - 1;
  std::vector<Complex> z;
  Complex seed{Real("0.4"), Real("0.9")};
  Real radius = 1;
  for (const auto& x : c) radius = std::max(radius, x.abs() + 1);
  Complex p(1);
  for (std::size_t i = 0; i < n; ++i) {
    z.push_back(p * Complex(radius));
    p *= seed;
  }
  auto eval = [&](const Complex& x) {
    Complex v = c[n];
    for (std::size_t k = n; k-- > 0;) v = v * x + c[k];
    return v;
  };
  const Real eps = epsilon_digits(digits);
  for (int it = 0; it < 5000; ++it) {
    Real worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex den(1);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      const Complex step = eval(z[i]) / den;
      z[i] -= step;
      worst = std::max(worst, step.abs() / std::max(Real(1), z[i].abs()));
    }
    if (worst < eps) return z;
  }
  fail(ErrorKind::Precision, "poly_roots: iteration did not converge");
}

struct Realization {
  bool found = false;
  std::vector<mpq_class> lambda;  // coefficients on the given invariants
  InvariantPolynomial invariant;
  ClassPolynomial polynomial;
  std::string diagnostic;
};

/// Looks for a Q-combination of `invs` whose class polynomial is `target`.
/// Coordinates are taken in the Q-basis {alpha^i, alpha^i sqrt D} of the ring class field,
/// alpha a member of the span with distinct conjugates; the result is re-verified exactly.
inline Realization realize_in_span(const std::vector<InvariantPolynomial>& invs, const FunctionBasis& fb, const ReciprocityGroup& G,
                                   const OrderContext& ctx, const ClassPolynomial& target, int digits) {
  Realization out;
  const std::size_t h = class_number(ctx.D);
  if (target.degree() != h) {
    out.diagnostic = "target degree differs from the class number";
    return out;
  }
  PrecisionScope ps(static_cast<unsigned>(digits + 20));
  const Complex sqD{Real(0), boost::multiprecision::sqrt(Real(-ctx.D))};
  // all 2h embeddings: the h conjugates over K and their complex conjugates
  auto embeddings = [&](const std::vector<Complex>& v) {
    std::vector<Complex> e = v;
    for (const auto& x : v) e.push_back(x.conj());
    return e;
  };
  std::vector<std::vector<Complex>> vals;
  for (const auto& w : invs) {
    std::vector<Complex> v;
    for (auto& cv : conjugate_values(w, fb, ctx, digits)) v.push_back(cv.value);
    vals.push_back(embeddings(v));
  }
  const Real sep = epsilon_digits(digits / 4);
  std::optional<std::size_t> alpha_idx;
  for (std::size_t i = 0; i < vals.size() && !alpha_idx; ++i) {
    bool distinct = true;
    for (std::size_t a = 0; a < h; ++a)
      for (std::size_t b = a + 1; b < h; ++b) distinct = distinct && (vals[i][a] - vals[i][b]).abs() > sep;
    if (distinct) alpha_idx = i;
  }
  if (!alpha_idx) {
    out.diagnostic = "no invariant in the span has distinct conjugates";
    return out;
  }
  const std::size_t n = 2 * h;
  const auto& alpha = vals[*alpha_idx];
  // E(e, k): basis element k at embedding e; sqrt D maps to its conjugate on the second half
  std::vector<std::vector<Complex>> E(n, std::vector<Complex>(n));
  for (std::size_t e = 0; e < n; ++e) {
    Complex pw(1);
    const Complex s = e < h ? sqD : sqD.conj();
    for (std::size_t i = 0; i < h; ++i) {
      E[e][i] = pw;
      E[e][h + i] = pw * s;
      pw *= alpha[e];
    }
  }
  auto solve_complex = [&](std::vector<Complex> rhs) -> std::vector<Complex> {
    auto A = E;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (A[r][c].abs() > A[p][c].abs()) p = r;
      std::swap(A[p], A[c]);
      std::swap(rhs[p], rhs[c]);
      if (A[c][c].abs() < sep) fail(ErrorKind::Precision, "realize_in_span: singular embedding matrix");
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c) continue;
        const Complex f = A[r][c] / A[c][c];
        for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
        rhs[r] -= f * rhs[c];
      }
    }
    for (std::size_t c = 0; c < n; ++c) rhs[c] /= A[c][c];
    return rhs;
  };
  const mpz_class max_den("1000000000000000000000000");
  const Real tol = epsilon_digits(digits / 3);
  auto rational_coords = [&](const std::vector<Complex>& emb) -> std::optional<std::vector<mpq_class>> {
    std::vector<mpq_class> q;
    for (const auto& x : solve_complex(emb)) {
      if (boost::multiprecision::abs(x.im) > tol * std::max(Real(1), x.abs())) return std::nullopt;
      auto r = recognize_rational(x.re, max_den, tol * std::max(Real(1), Real(boost::multiprecision::abs(x.re))));
      if (!r) return std::nullopt;
      q.push_back(*r);
    }
    return q;
  };
  std::vector<std::vector<mpq_class>> cols;
  for (const auto& v : vals) {
    auto c = rational_coords(v);
    if (!c) {
      out.diagnostic = "an invariant value has no rational coordinates in the chosen basis";
      return out;
    }
    cols.push_back(*c);
  }
  // target roots over K, embedded with sqrt D = +i sqrt|D|
  std::vector<Complex> tc;
  for (const auto& e : target.coeffs) {
    const Real v(e.v.get_str());
    tc.push_back({Real(e.u.get_str()) - v * Real(ctx.B) / 2, v * boost::multiprecision::sqrt(Real(-ctx.D)) / 2});
  }
  const auto roots = poly_roots(tc, digits);
  std::vector<std::size_t> perm(h);
  std::iota(perm.begin(), perm.end(), 0);
  bool any_rational = false;
  do {
    std::vector<Complex> assigned;
    for (std::size_t i = 0; i < h; ++i) assigned.push_back(roots[perm[i]]);
    auto t = rational_coords(embeddings(assigned));
    if (!t) continue;
    any_rational = true;
    Matrix<mpq_class> A = Matrix<mpq_class>::from_columns(cols, n, mpq_class(0));
    auto lam = solve(A, *t, mpq_class(0));
    if (!lam) continue;
    InvariantPolynomial w;
    bool first = true;
    for (std::size_t j = 0; j < invs.size(); ++j) {
      if ((*lam)[j] == 0) continue;
      auto term = invs[j].scaled((*lam)[j]);
      w = first ? term : w + term;
      first = false;
    }
    if (first || !verify_class_invariant(w, fb, G, true)) continue;
    auto poly = class_polynomial(w, fb, ctx, digits);
    if (poly == target) {
      out.found = true;
      out.lambda = *lam;
      out.invariant = w;
      out.polynomial = poly;
      return out;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.diagnostic = any_rational ? "the target roots lie in the ring class field but outside the descended span"
                                : "the target roots do not lie in the ring class field";
  return out;
}

}  // namespace classinv
