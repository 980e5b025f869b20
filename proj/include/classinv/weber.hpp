#pragma once

// Generalized Weber functions of level 24N and the level-72 g-family, with the right
// action of GL(2, Z/MZ) on their span: e_i o g = sum_nu rho(g)_{nu,i} e_nu.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "classinv/numeric.hpp"
#include "classinv/qseries.hpp"
#include "classinv/zmat.hpp"

namespace classinv {

/// Square matrix over Q(zeta_M). Stored monomially (one root of unity per column) when possible.
class ActionMatrix {
 public:
  ActionMatrix() = default;

  static ActionMatrix identity(std::size_t n, i64 M) {
    ActionMatrix a;
    a.n_ = n;
    a.M_ = M;
    a.monomial_ = true;
    for (std::size_t i = 0; i < n; ++i) a.mono_.emplace_back(i, 0);
    return a;
  }
  /// Column i is zeta^{e_i} in row r_i.
  static ActionMatrix monomial(i64 M, std::vector<std::pair<std::size_t, i64>> cols) {
    ActionMatrix a;
    a.n_ = cols.size();
    a.M_ = M;
    a.monomial_ = true;
    for (auto& [r, e] : cols) e = mod(e, M);
    a.mono_ = std::move(cols);
    a.check_perm();
    return a;
  }
  /// Row-major dense entries; collapses to monomial form when every column is a single root of unity.
  static ActionMatrix dense(std::size_t n, i64 M, std::vector<CycloNum> entries) {
    require(entries.size() == n * n, "ActionMatrix: wrong number of entries");
    ActionMatrix a;
    a.n_ = n;
    a.M_ = M;
    std::vector<std::pair<std::size_t, i64>> cols;
    bool mono = true;
    for (std::size_t c = 0; c < n && mono; ++c) {
      std::size_t nz = 0, row = 0;
      for (std::size_t r = 0; r < n; ++r)
        if (!entries[r * n + c].is_zero()) ++nz, row = r;
      if (nz != 1) {
        mono = false;
        break;
      }
      auto e = entries[row * n + c].root_exponent();
      if (!e) {
        mono = false;
        break;
      }
      cols.emplace_back(row, *e);
    }
    if (mono) {
      a.monomial_ = true;
      a.mono_ = std::move(cols);
      a.check_perm();
    } else {
      a.dense_ = std::move(entries);
    }
    return a;
  }

  std::size_t size() const { return n_; }
  i64 modulus() const { return M_; }
  bool is_monomial() const { return monomial_; }
  /// For monomial matrices: column i -> (row, exponent of zeta_M).
  const std::vector<std::pair<std::size_t, i64>>& columns() const {
    require(monomial_, "ActionMatrix: not monomial");
    return mono_;
  }

  CycloNum entry(std::size_t r, std::size_t c) const {
    if (monomial_) return mono_[c].first == r ? CycloNum::root(M_, mono_[c].second) : CycloNum(M_);
    return dense_[r * n_ + c];
  }

  friend ActionMatrix operator*(const ActionMatrix& A, const ActionMatrix& B) {
    require(A.n_ == B.n_ && A.M_ == B.M_, "ActionMatrix: shape mismatch");
    if (A.monomial_ && B.monomial_) {
      std::vector<std::pair<std::size_t, i64>> cols;
      cols.reserve(A.n_);
      for (const auto& [k, e2] : B.mono_) cols.emplace_back(A.mono_[k].first, A.mono_[k].second + e2);
      return monomial(A.M_, std::move(cols));
    }
    const std::size_t n = A.n_;
    std::vector<CycloNum> out(n * n, CycloNum(A.M_));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        CycloNum a = A.entry(r, k);
        if (a.is_zero()) continue;
        for (std::size_t c = 0; c < n; ++c) {
          CycloNum b = B.entry(k, c);
          if (!b.is_zero()) out[r * n + c] += a * b;
        }
      }
    return dense(n, A.M_, std::move(out));
  }

  /// Entrywise sigma_d.
  ActionMatrix galois(i64 d) const {
    require(is_unit(d, M_), "ActionMatrix::galois: d is not a unit");
    if (monomial_) {
      auto cols = mono_;
      for (auto& [r, e] : cols) e = mod(e * d, M_);
      return monomial(M_, std::move(cols));
    }
    std::vector<CycloNum> out;
    out.reserve(dense_.size());
    for (const auto& x : dense_) out.push_back(x.galois(d));
    return dense(n_, M_, std::move(out));
  }

  friend bool operator==(const ActionMatrix& A, const ActionMatrix& B) {
    if (A.n_ != B.n_ || A.M_ != B.M_) return false;
    if (A.monomial_ && B.monomial_) return A.mono_ == B.mono_;
    for (std::size_t r = 0; r < A.n_; ++r)
      for (std::size_t c = 0; c < A.n_; ++c)
        if (A.entry(r, c) != B.entry(r, c)) return false;
    return true;
  }

  /// Renders each column as `label_i o g = (coeff)*label_j + ...`.
  std::string to_string(const std::vector<std::string>& labels) const {
    std::ostringstream os;
    for (std::size_t c = 0; c < n_; ++c) {
      os << labels[c] << " o g =";
      bool first = true;
      for (std::size_t r = 0; r < n_; ++r) {
        CycloNum x = entry(r, c);
        if (x.is_zero()) continue;
        os << (first ? " " : " + ") << "(" << x.to_string() << ")*" << labels[r];
        first = false;
      }
      os << "\n";
    }
    return os.str();
  }

 private:
  void check_perm() const {
    std::vector<bool> seen(n_, false);
    for (const auto& [r, e] : mono_) {
      require(r < n_ && !seen[r], "ActionMatrix: monomial columns must form a permutation");
      seen[r] = true;
    }
  }

  std::size_t n_ = 0;
  i64 M_ = 1;
  bool monomial_ = false;
  std::vector<std::pair<std::size_t, i64>> mono_;
  std::vector<CycloNum> dense_;
};

enum class Family { Nu, G72 };

/// A built-in basis e_i = zeta_M^{s_i} * nu_{L(i)} of eta quotients.
class FunctionBasis {
 public:
  /// nu_{N,0}, nu_{0,N}, ..., nu_{N-1,N} of level 24N for an odd prime N.
  static std::shared_ptr<FunctionBasis> nu(i64 N) {
    require(N >= 3 && is_prime(N), "FunctionBasis::nu: N must be an odd prime");
    std::vector<i64> under{kNuN0};
    std::vector<std::string> labels{"nuN0"};
    for (i64 k = 0; k < N; ++k) {
      under.push_back(k);
      labels.push_back("nu" + std::to_string(k));
    }
    return std::shared_ptr<FunctionBasis>(
        new FunctionBasis(Family::Nu, N, std::move(labels), std::move(under), std::vector<i64>(static_cast<std::size_t>(N + 1), 0)));
  }

  /// g0 = eta(tau/3)/eta, g1 = zeta_24^{-1} eta((tau+1)/3)/eta, g2 = eta((tau+2)/3)/eta, g3 = sqrt3 eta(3tau)/eta.
  static std::shared_ptr<FunctionBasis> g72() {
    return std::shared_ptr<FunctionBasis>(new FunctionBasis(Family::G72, 3, {"g0", "g1", "g2", "g3"}, {0, 1, 2, kNuN0}, {0, -3, 0, 0}));
  }

  /// "g72" or "nu<N>".
  static std::shared_ptr<FunctionBasis> by_name(const std::string& name) {
    if (name == "g72") return g72();
    if (name.size() > 2 && name.compare(0, 2, "nu") == 0) {
      const std::string digits = name.substr(2);
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) && digits.size() < 6)
        return nu(std::stoll(digits));
    }
    fail(ErrorKind::BadInput, "unknown function family '" + name + "'");
  }

  Family family() const { return family_; }
  i64 N() const { return N_; }
  i64 level() const { return M_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string name() const { return family_ == Family::G72 ? "g72" : "nu" + std::to_string(N_); }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    fail(ErrorKind::BadInput, "unknown basis label '" + label + "'");
  }

  /// The q-expansions (in q^{1/M}), computed with at least the default truncation.
  const std::vector<QExpansion>& expansions() const {
    std::lock_guard<std::mutex> lock(mu_);
    if (expansions_.empty()) build_expansions(default_order());
    return expansions_;
  }

  /// 40 fractional steps per basis function past the most negative leading exponent.
  i64 default_order() const { return (1 - N_) + 40 * static_cast<i64>(size()); }

  QExpansion expansion_of(std::size_t i, i64 order) const {
    QExpansion e = nu_expansion(under_[i], N_, order);
    return e.scaled(CycloNum::root(M_, scal_[i]));
  }

  const ActionMatrix& action_T() const {
    std::call_once(t_once_, [this] { t_ = derive([](const QExpansion& f) { return f.act_T(); }); });
    return t_;
  }

  /// From the eta multiplier: nu_{N,0} <-> nu_0 and nu_k -> eps * nu_c with c = -1/k mod N.
  const ActionMatrix& action_S() const {
    std::call_once(s_once_, [this] {
      std::vector<std::pair<std::size_t, i64>> cols;
      for (std::size_t i = 0; i < size(); ++i) {
        auto [target, phase] = nu_S(under_[i]);
        std::size_t j = index_of_under(target);
        cols.emplace_back(j, scal_[i] + phase - scal_[j]);
      }
      s_ = ActionMatrix::monomial(M_, std::move(cols));
    });
    return s_;
  }

  /// rho(diag(1, d)): sigma_d on the Fourier coefficients, recognized in the basis.
  ActionMatrix action_sigma(i64 d) const {
    d = mod(d, M_);
    require(is_unit(d, M_), "action_sigma: d is not a unit");
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = sigma_.find(d);
      if (it != sigma_.end()) return it->second;
    }
    ActionMatrix a = d == 1 ? ActionMatrix::identity(size(), M_) : derive([d](const QExpansion& f) { return f.galois_coeffs(d); });
    std::lock_guard<std::mutex> lock(mu_);
    return sigma_.emplace(d, std::move(a)).first->second;
  }

  /// rho(m) = rho(diag(1,d)) * sigma_d(rho(b)) for m = b diag(1,d), rho(b) composed along an ST word.
  ActionMatrix action_of(const ResidueMatrix& m) const {
    require(m.modulus() == M_, "action_of: matrix modulus differs from the basis level");
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find(m);
      if (it != memo_.end()) return it->second;
    }
    auto sp = split_det(m);
    ActionMatrix r = action_of_word(decompose_st(sp.sl2));
    if (sp.d != 1) r = action_sigma(sp.d) * r.galois(sp.d);
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.emplace(m, std::move(r)).first->second;
  }

  /// rho(L_1 ... L_r) = rho(L_r) ... rho(L_1) for det-1 letters.
  ActionMatrix action_of_word(const STWord& w) const {
    ActionMatrix r = ActionMatrix::identity(size(), M_);
    for (const auto& l : w.letters()) r = letter_power(l) * r;
    return r;
  }

  // ---- numeric side ---------------------------------------------------------

  /// Values e_i(tau) from eta products.
  std::vector<Complex> evaluate(const Complex& tau, int digits) const { return evaluate_conjugate(1, tau, digits); }

  /// Values of sigma_d(e_i) at tau, from the analytic form of the conjugated expansions.
  std::vector<Complex> evaluate_conjugate(i64 d, const Complex& tau, int digits) const {
    d = mod(d, M_);
    require(is_unit(d, M_), "evaluate_conjugate: d is not a unit");
    PrecisionScope ps(static_cast<unsigned>(digits + 10));
    const Complex e = eta(tau, digits + 5);
    const Complex n{Real(N_)};
    std::vector<Complex> out;
    const auto& roots = cyclo_context(M_)->roots(digits + 10);
    for (std::size_t i = 0; i < size(); ++i) {
      Complex v;
      if (under_[i] == kNuN0) {
        v = sqrt_gauss(N_, M_).embed_at(d, digits + 10) * eta(n * tau, digits + 5) / e;
      } else {
        v = eta((tau + Complex(Real(d * under_[i]))) / n, digits + 5) / e;
      }
      out.push_back(roots[static_cast<std::size_t>(mod(d * scal_[i], M_))] * v);
    }
    return out;
  }

  /// max_i |e_i o g (tau) - sum_nu rho_{nu,i} e_nu(tau)| for an integer lift g of the det-1 matrix.
  Real numeric_residual(const IntMatrix& g, const ActionMatrix& rho, const Complex& tau, int digits) const {
    PrecisionScope ps(static_cast<unsigned>(digits + 10));
    const Complex gt = (Complex(Real(g[0])) * tau + Complex(Real(g[1]))) / (Complex(Real(g[2])) * tau + Complex(Real(g[3])));
    return compare(evaluate(gt, digits), rho, evaluate(tau, digits), digits);
  }

  /// Same check for rho(diag(1,d)) against the analytic conjugates.
  Real numeric_residual_sigma(i64 d, const Complex& tau, int digits) const {
    PrecisionScope ps(static_cast<unsigned>(digits + 10));
    return compare(evaluate_conjugate(d, tau, digits), action_sigma(d), evaluate(tau, digits), digits);
  }

 private:
  FunctionBasis(Family f, i64 N, std::vector<std::string> labels, std::vector<i64> under, std::vector<i64> scal)
      : family_(f), N_(N), M_(24 * N), labels_(std::move(labels)), under_(std::move(under)), scal_(std::move(scal)) {
    for (auto& s : scal_) s = mod(s, M_);
  }

  std::size_t index_of_under(i64 label) const {
    for (std::size_t i = 0; i < under_.size(); ++i)
      if (under_[i] == label) return i;
    fail(ErrorKind::Verification, "FunctionBasis: basis not closed under S");
  }

  /// nu_label o S = zeta_M^phase nu_target.
  std::pair<i64, i64> nu_S(i64 label) const {
    if (label == kNuN0) return {0, 0};
    if (label == 0) return {kNuN0, 0};
    const i64 c = mod(-inv_mod(label, N_), N_);
    // (tau + c)/N maps to (-1/tau + k)/N under gamma = (k, -(kc+1)/N; N, -c)
    const i64 b = -(label * c + 1) / N_;
    return {c, eta_multiplier24(label, b, N_, -c) * (M_ / 24)};
  }

  const ActionMatrix& letter_power(const Letter& l) const {
    std::lock_guard<std::mutex> lock(pow_mu_);
    if (l.gen == Gen::S) {
      const i64 e = mod(l.exp, 4);
      if (s_pow_.empty()) {
        s_pow_.push_back(ActionMatrix::identity(size(), M_));
        for (int k = 1; k < 4; ++k) s_pow_.push_back(action_S() * s_pow_.back());
      }
      return s_pow_[static_cast<std::size_t>(e)];
    }
    const i64 e = mod(l.exp, M_);
    if (t_pow_.empty()) {
      t_pow_.push_back(ActionMatrix::identity(size(), M_));
      for (i64 k = 1; k < M_; ++k) t_pow_.push_back(action_T() * t_pow_.back());
    }
    return t_pow_[static_cast<std::size_t>(e)];
  }

  void build_expansions(i64 order) const {
    expansions_.clear();
    for (std::size_t i = 0; i < size(); ++i) expansions_.push_back(expansion_of(i, order));
  }

  /// Unique (j, e) with f = zeta^e * basis_j below the common order, if any.
  static std::optional<std::pair<std::size_t, i64>> monomial_match(const QExpansion& f, const std::vector<QExpansion>& basis) {
    if (f.is_zero()) return std::nullopt;
    std::optional<std::pair<std::size_t, i64>> found;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto& b = basis[j];
      if (b.is_zero() || b.leading_exponent() != f.leading_exponent()) continue;
      auto e = (f.leading_coeff() * b.leading_coeff().inv()).root_exponent();
      if (!e || !f.agrees_with(b.scaled(CycloNum::root(f.coeff_modulus(), *e)))) continue;
      if (found) fail(ErrorKind::Recognition, "monomial match is not unique");
      found = std::make_pair(j, *e);
    }
    return found;
  }

  // The nu functions for N >= 5 span only (N+1)/2 dimensions, so the action on the formal
  // symbols is fixed by matching each transformed expansion to a single rescaled basis
  // function; general linear recognition is the fallback.
  template <class Op>
  ActionMatrix derive(Op op) const {
    for (int attempt = 0; attempt < 4; ++attempt) {
      std::vector<QExpansion> basis;
      {
        std::lock_guard<std::mutex> lock(mu_);
        if (expansions_.empty()) build_expansions(default_order());
        basis = expansions_;
      }
      std::vector<CycloNum> entries(size() * size(), CycloNum(M_));
      bool ambiguous = false;
      for (std::size_t i = 0; i < size() && !ambiguous; ++i) {
        QExpansion f = op(basis[i]);
        if (auto m = monomial_match(f, basis)) {
          entries[m->first * size() + i] = CycloNum::root(M_, m->second);
          continue;
        }
        auto r = try_recognize_linear(f, basis);
        if (r.status == RecognitionStatus::NoSolution)
          fail(ErrorKind::Recognition, "transformed expansion lies outside the span of the basis");
        if (r.status == RecognitionStatus::Ambiguous) {
          ambiguous = true;
          break;
        }
        for (std::size_t j = 0; j < size(); ++j) entries[j * size() + i] = r.coeffs[j];
      }
      if (!ambiguous) return ActionMatrix::dense(size(), M_, std::move(entries));
      std::lock_guard<std::mutex> lock(mu_);
      build_expansions(2 * (basis.front().order() + N_) - N_);
    }
    fail(ErrorKind::Precision, "action recognition stayed ambiguous after doubling the truncation");
  }

  Real compare(const std::vector<Complex>& lhs, const ActionMatrix& rho, const std::vector<Complex>& base, int digits) const {
    Real worst = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      Complex rhs;
      for (std::size_t v = 0; v < size(); ++v) {
        CycloNum c = rho.entry(v, i);
        if (!c.is_zero()) rhs += c.embed(digits + 10) * base[v];
      }
      Real r = (lhs[i] - rhs).abs();
      if (r > worst) worst = r;
    }
    return worst;
  }

  Family family_;
  i64 N_;
  i64 M_;
  std::vector<std::string> labels_;
  std::vector<i64> under_;
  std::vector<i64> scal_;

  mutable std::mutex mu_;
  mutable std::vector<QExpansion> expansions_;
  mutable std::map<i64, ActionMatrix> sigma_;
  mutable std::map<ResidueMatrix, ActionMatrix> memo_;
  mutable std::once_flag t_once_, s_once_;
  mutable ActionMatrix t_, s_;
  mutable std::mutex pow_mu_;
  mutable std::vector<ActionMatrix> s_pow_, t_pow_;
};

/// The formula nu_{k,N} o S = (-c|N) i^{(1-N)/2} zeta_24^{N(k-c)} nu_{c,N}, as a zeta_{24N} exponent.
inline i64 closed_form_S_phase(i64 k, i64 N) {
  const i64 c = mod(-inv_mod(k, N), N);
  const i64 M = 24 * N;
  i64 e = N * (N * (k - c)) + (M / 4) * ((1 - N) / 2);
  if (legendre(-c, N) < 0) e += M / 2;
  return mod(e, M);
}

/// Small SL(2,Z) lift of a short word, for numeric checks.
inline IntMatrix integer_lift(const STWord& w) { return eval_word_integer(w); }

}  // namespace classinv
