#pragma once

// Truncated q-expansions in q^{1/denom} with coefficients in Q(zeta_M).

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "classinv/cyclo.hpp"

namespace classinv {

/// sum_e c_e q^{e/denom} + O(q^{order/denom}).
class QExpansion {
 public:
  QExpansion(i64 denom, i64 coeff_modulus, i64 order) : denom_(denom), M_(coeff_modulus), order_(order) {
    require(denom >= 1, "QExpansion: denominator must be positive");
  }

  i64 denom() const { return denom_; }
  i64 coeff_modulus() const { return M_; }
  /// Exclusive bound on exponent numerators.
  i64 order() const { return order_; }
  const std::map<i64, CycloNum>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  i64 leading_exponent() const {
    require(!terms_.empty(), "QExpansion: zero series has no leading term");
    return terms_.begin()->first;
  }
  const CycloNum& leading_coeff() const {
    require(!terms_.empty(), "QExpansion: zero series has no leading term");
    return terms_.begin()->second;
  }

  CycloNum coeff(i64 e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? CycloNum(M_) : it->second;
  }

  /// Adds c q^{e/denom}; terms at or past the order are dropped.
  void add_term(i64 e, const CycloNum& c) {
    require(c.modulus() == M_, "QExpansion: coefficient modulus mismatch");
    if (e >= order_ || c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  QExpansion truncated(i64 order) const {
    require(order <= order_, "QExpansion::truncated: requested order exceeds the known order");
    QExpansion r(denom_, M_, order);
    for (const auto& [e, c] : terms_)
      if (e < order) r.terms_.emplace(e, c);
    return r;
  }

  QExpansion operator+(const QExpansion& o) const {
    check_same(o);
    QExpansion r(denom_, M_, std::min(order_, o.order_));
    for (const auto& [e, c] : terms_) r.add_term(e, c);
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  QExpansion operator-() const {
    QExpansion r(denom_, M_, order_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  QExpansion operator-(const QExpansion& o) const { return *this + (-o); }

  QExpansion scaled(const CycloNum& s) const {
    QExpansion r(denom_, M_, order_);
    if (s.is_zero()) return r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
    return r;
  }

  /// Truncated product; exact for exponents below the returned order.
  QExpansion operator*(const QExpansion& o) const {
    check_same(o);
    if (terms_.empty() || o.terms_.empty()) return QExpansion(denom_, M_, std::min(order_, o.order_));
    const i64 ord = std::min(order_ + o.leading_exponent(), o.order_ + leading_exponent());
    QExpansion r(denom_, M_, ord);
    for (const auto& [e1, c1] : terms_) {
      for (const auto& [e2, c2] : o.terms_) {
        if (e1 + e2 >= ord) break;
        r.add_term(e1 + e2, c1 * c2);
      }
    }
    return r;
  }

  /// Multiplicative inverse; needs a nonzero leading coefficient.
  QExpansion inverse() const {
    const i64 l = leading_exponent();
    const CycloNum a0inv = leading_coeff().inv();
    const i64 ord = order_ - 2 * l;
    QExpansion r(denom_, M_, ord);
    // only offsets in the lattice spanned by the gaps can occur
    i64 step = 0;
    for (const auto& [e, c] : terms_) step = std::gcd(step, e - l);
    if (step == 0) step = order_ - l;  // monomial
    std::map<i64, CycloNum> b;  // offset k -> coefficient of q^{(-l+k)/denom}
    for (i64 k = 0; -l + k < ord; k += step) {
      CycloNum s(M_);
      if (k == 0) {
        s = a0inv;
      } else {
        for (const auto& [e, c] : terms_) {
          i64 j = e - l;
          if (j == 0) continue;
          if (j > k) break;
          auto it = b.find(k - j);
          if (it != b.end()) s += c * it->second;
        }
        s = -(s * a0inv);
      }
      if (!s.is_zero()) {
        b.emplace(k, s);
        r.terms_.emplace(-l + k, s);
      }
    }
    return r;
  }

  QExpansion operator/(const QExpansion& o) const { return *this * o.inverse(); }

  /// Coefficientwise sigma_d.
  QExpansion galois_coeffs(i64 d) const {
    require(is_unit(d, M_), "galois_coeffs: d is not a unit");
    QExpansion r(denom_, M_, order_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.galois(d));
    return r;
  }

  /// tau -> tau + 1: the q^{e/denom} coefficient picks up e^{2 pi i e/denom}.
  QExpansion act_T() const {
    require(M_ % denom_ == 0, "act_T: coefficient field lacks the denom-th roots of unity");
    QExpansion r(denom_, M_, order_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.mul_root(mod(e, denom_) * (M_ / denom_)));
    return r;
  }

  /// Equality of all coefficients below the smaller order.
  bool agrees_with(const QExpansion& o) const {
    check_same(o);
    const i64 ord = std::min(order_, o.order_);
    for (const auto& [e, c] : terms_)
      if (e < ord && o.coeff(e) != c) return false;
    for (const auto& [e, c] : o.terms_)
      if (e < ord && coeff(e) != c) return false;
    return true;
  }

  /// Debug dump, one line `q^(a/b): <cyclo>` per term.
  std::string dump() const {
    std::ostringstream os;
    for (const auto& [e, c] : terms_) {
      i64 g = std::gcd(std::abs(e), denom_);
      if (g == 0) g = denom_;
      os << "q^(" << e / g << "/" << denom_ / g << "): " << c.to_string() << "\n";
    }
    return os.str();
  }

 private:
  void check_same(const QExpansion& o) const {
    require(denom_ == o.denom_ && M_ == o.M_, "QExpansion: incompatible series");
  }

  i64 denom_;
  i64 M_;
  i64 order_;
  std::map<i64, CycloNum> terms_;
};

/// prod_{n>=1} (1 - q^n) as integer coefficients up to q^{terms-1}.
inline std::vector<mpz_class> euler_product(i64 terms) {
  std::vector<mpz_class> p(static_cast<std::size_t>(terms));
  p[0] = 1;
  for (i64 n = 1; n < terms; ++n)
    for (i64 k = terms - 1; k >= n; --k) p[static_cast<std::size_t>(k)] -= p[static_cast<std::size_t>(k - n)];
  return p;
}

/// eta(tau) = q^{1/24} prod (1 - q^n) in q^{1/24}, known through q^{order - 1 + 1/24}.
inline QExpansion eta_series(i64 order, i64 coeff_modulus = 24) {
  require(order > 0, "eta_series: order must be positive");
  auto p = euler_product(order);
  QExpansion r(24, coeff_modulus, 24 * order + 1);
  for (i64 n = 0; n < order; ++n)
    if (p[static_cast<std::size_t>(n)] != 0) r.add_term(1 + 24 * n, CycloNum(coeff_modulus, mpq_class(p[static_cast<std::size_t>(n)])));
  return r;
}

/// eta((a tau + b)/c) as a series in q^{1/denom} with coefficients in Q(zeta_M).
inline QExpansion eta_substituted(i64 a, i64 b, i64 c, i64 denom, i64 M, i64 q_terms) {
  require(a >= 1 && c >= 1, "eta_substituted: a, c must be positive");
  require(denom % (24 * c) == 0, "eta_substituted: denominator incompatible");
  require(M % (24 * c) == 0 || b == 0, "eta_substituted: coefficient field lacks the needed roots");
  const auto p = euler_product(q_terms);
  const i64 scale = a * (denom / (24 * c));
  QExpansion r(denom, M, (1 + 24 * q_terms) * scale);
  for (i64 n = 0; n < q_terms; ++n) {
    const auto& z = p[static_cast<std::size_t>(n)];
    if (z == 0) continue;
    const i64 t = 1 + 24 * n;
    CycloNum coeff(M, mpq_class(z));
    if (b != 0) coeff = coeff.mul_root(mod(t * b, 24 * c) * (M / (24 * c)));
    r.add_term(t * scale, coeff);
  }
  return r;
}

/// Labels of the generalized Weber functions for prime N: nu_{N,0} is `-1`, nu_{k,N} is k.
constexpr i64 kNuN0 = -1;

/// Expansion of nu_{N,0} = sqrt(N) eta(N tau)/eta(tau) or nu_{k,N} = eta((tau+k)/N)/eta(tau)
/// in q^{1/(24N)} over Q(zeta_{24N}), known for exponent numerators below `order`.
inline QExpansion nu_expansion(i64 label, i64 N, i64 order) {
  require(N >= 3 && is_prime(N), "nu_expansion: N must be an odd prime");
  require(label == kNuN0 || (label >= 0 && label < N), "nu_expansion: unknown label");
  const i64 D = 24 * N, M = 24 * N;
  // q-terms needed so every factor is known past `order`
  const i64 q_terms = order / 24 + N + 4;
  QExpansion den = eta_substituted(1, 0, 1, D, M, q_terms);
  QExpansion num = label == kNuN0 ? eta_substituted(N, 0, 1, D, M, q_terms) : eta_substituted(1, label, N, D, M, q_terms);
  QExpansion r = num / den;
  if (label == kNuN0) r = r.scaled(sqrt_gauss(N, M));
  return r.truncated(order);
}

enum class RecognitionStatus { Ok, NoSolution, Ambiguous };

struct Recognition {
  RecognitionStatus status = RecognitionStatus::Ok;
  std::vector<CycloNum> coeffs;
};

/// Solves target = sum c_i basis_i below the common truncation order, exactly.
inline Recognition try_recognize_linear(const QExpansion& target, const std::vector<QExpansion>& basis) {
  require(!basis.empty(), "recognize_linear: empty basis");
  const i64 M = target.coeff_modulus();
  i64 ord = target.order();
  for (const auto& b : basis) {
    require(b.denom() == target.denom() && b.coeff_modulus() == M, "recognize_linear: incompatible series");
    ord = std::min(ord, b.order());
  }
  const std::size_t n = basis.size();
  std::map<i64, bool> exps;
  for (const auto& b : basis)
    for (const auto& [e, c] : b.terms())
      if (e < ord) exps[e] = true;
  for (const auto& [e, c] : target.terms())
    if (e < ord) exps[e] = true;
  if (exps.size() < 3 * n) return {RecognitionStatus::Ambiguous, {}};

  struct Pivot {
    std::size_t col;
    std::vector<CycloNum> row;
    CycloNum rhs;
  };
  std::vector<Pivot> piv;
  for (const auto& [e, unused] : exps) {
    (void)unused;
    std::vector<CycloNum> row;
    row.reserve(n);
    for (const auto& b : basis) row.push_back(b.coeff(e));
    CycloNum rhs = target.coeff(e);
    for (const auto& p : piv) {
      if (row[p.col].is_zero()) continue;
      CycloNum f = row[p.col];
      for (std::size_t j = 0; j < n; ++j)
        if (!p.row[j].is_zero()) row[j] -= f * p.row[j];
      rhs -= f * p.rhs;
    }
    std::size_t c = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!row[j].is_zero()) {
        c = j;
        break;
      }
    if (c == n) {
      if (!rhs.is_zero()) return {RecognitionStatus::NoSolution, {}};
      continue;
    }
    CycloNum inv = row[c].inv();
    for (auto& x : row) x = x * inv;
    rhs = rhs * inv;
    piv.push_back({c, std::move(row), std::move(rhs)});
    if (piv.size() == n) break;
  }
  if (piv.size() < n) return {RecognitionStatus::Ambiguous, {}};
  // each pivot row is clear in the columns of earlier pivots, so resolve from the last one back
  std::vector<CycloNum> sol(n, CycloNum(M));
  std::vector<bool> known(n, false);
  for (std::size_t k = piv.size(); k-- > 0;) {
    const auto& p = piv[k];
    CycloNum s = p.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == p.col || p.row[j].is_zero()) continue;
      if (!known[j]) fail(ErrorKind::Recognition, "recognize_linear: triangular solve did not close");
      s -= p.row[j] * sol[j];
    }
    sol[p.col] = s;
    known[p.col] = true;
  }
  for (bool k : known)
    if (!k) fail(ErrorKind::Recognition, "recognize_linear: triangular solve did not close");
  // residual over every exponent below the order
  QExpansion res = target.truncated(ord);
  for (std::size_t i = 0; i < n; ++i) res = res - basis[i].truncated(ord).scaled(sol[i]);
  if (!res.is_zero()) return {RecognitionStatus::NoSolution, {}};
  return {RecognitionStatus::Ok, std::move(sol)};
}

inline std::vector<CycloNum> recognize_linear(const QExpansion& target, const std::vector<QExpansion>& basis) {
  auto r = try_recognize_linear(target, basis);
  if (r.status == RecognitionStatus::NoSolution) fail(ErrorKind::Recognition, "recognize_linear: target outside the span");
  if (r.status == RecognitionStatus::Ambiguous) fail(ErrorKind::Precision, "recognize_linear: truncation too short");
  return r.coeffs;
}

}  // namespace classinv
