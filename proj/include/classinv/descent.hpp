#pragma once

// The reciprocity group W_{M,theta}, H-invariant polynomial spaces and the Hilbert 90 descent
// to a rational basis of class invariants.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "classinv/linalg.hpp"
#include "classinv/weber.hpp"

namespace classinv {

/// theta is the root of x^2 + Bx + C in the upper half plane; O = Z[theta].
struct OrderContext {
  i64 D = 0, B = 0, C = 0, M = 0;

  /// Defaults: B = 1 for odd D, B = 0 for even D.
  static OrderContext make(i64 D, i64 M, std::optional<i64> B = std::nullopt, std::optional<i64> C = std::nullopt) {
    if (D >= -4) fail(ErrorKind::BadInput, "discriminant must satisfy D < -4 (got " + std::to_string(D) + ")");
    if (mod(D, 4) != 0 && mod(D, 4) != 1) fail(ErrorKind::BadInput, "discriminant must be 0 or 1 mod 4");
    if (M < 2) fail(ErrorKind::BadInput, "level must be at least 2");
    OrderContext o;
    o.D = D;
    o.M = M;
    o.B = B ? *B : (mod(D, 2) ? 1 : 0);
    if (C) {
      o.C = *C;
    } else {
      if (mod(o.B * o.B - D, 4) != 0) fail(ErrorKind::BadInput, "B has the wrong parity for D");
      o.C = (o.B * o.B - D) / 4;
    }
    if (o.B * o.B - 4 * o.C != D) fail(ErrorKind::BadInput, "B^2 - 4C must equal D");
    return o;
  }

  /// Matrix of multiplication by t + s*theta on the basis (theta, 1).
  ResidueMatrix element(i64 t, i64 s) const { return {t - B * s, -C * s, s, t, M}; }
  i64 norm(i64 t, i64 s) const { return mod(t * t - B * t * s + C * s * s, M); }

  Complex theta(int digits) const {
    PrecisionScope ps(static_cast<unsigned>(digits + 10));
    return {Real(-B) / 2, boost::multiprecision::sqrt(Real(-D)) / 2};
  }
};

namespace detail {

struct ResidueHash {
  std::size_t operator()(const ResidueMatrix& m) const { return std::hash<ResidueMatrix>{}(m); }
};

/// Greedy generating set of the abelian group `elems` (contains the identity).
inline std::vector<ResidueMatrix> greedy_generators(const std::vector<ResidueMatrix>& elems, i64 M) {
  std::unordered_set<ResidueMatrix, ResidueHash> span{ResidueMatrix::identity(M)};
  std::vector<ResidueMatrix> gens;
  for (const auto& g : elems) {
    if (span.count(g)) continue;
    gens.push_back(g);
    std::vector<ResidueMatrix> cur(span.begin(), span.end());
    std::vector<ResidueMatrix> grown = cur;
    ResidueMatrix p = g;
    while (!span.count(p)) {
      for (const auto& x : cur) grown.push_back(x * p);
      p = p * g;
    }
    for (auto& x : grown) span.insert(x);
  }
  return gens;
}

}  // namespace detail

struct ReciprocityGroup {
  i64 M = 0;
  std::vector<ResidueMatrix> elements;
  std::vector<ResidueMatrix> H;
  /// Lexicographically smallest (t, s) per attained determinant.
  std::map<i64, ResidueMatrix> coset_reps;
  std::vector<ResidueMatrix> generators, h_generators;

  std::vector<i64> det_image() const {
    std::vector<i64> out;
    for (const auto& [d, g] : coset_reps) out.push_back(d);
    return out;
  }
  bool det_surjective() const { return static_cast<i64>(coset_reps.size()) == euler_phi(M); }
};

/// All matrices of t + s*theta with t + s*theta a unit in O/MO.
inline ReciprocityGroup build_group(const OrderContext& ctx) {
  ReciprocityGroup G;
  G.M = ctx.M;
  for (i64 t = 0; t < ctx.M; ++t)
    for (i64 s = 0; s < ctx.M; ++s) {
      if (!is_unit(ctx.norm(t, s), ctx.M)) continue;
      ResidueMatrix g = ctx.element(t, s);
      G.elements.push_back(g);
      const i64 d = g.det();
      if (d == 1) G.H.push_back(g);
      G.coset_reps.emplace(d, g);
    }
  G.generators = detail::greedy_generators(G.elements, ctx.M);
  G.h_generators = detail::greedy_generators(G.H, ctx.M);
  return G;
}

/// Degree-n monomials in m variables as sorted index tuples, lexicographic.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t vars, int degree) : vars_(vars), degree_(degree) {
    require(degree >= 1, "MonomialBasis: degree must be positive");
    std::vector<int> cur(static_cast<std::size_t>(degree), 0);
    for (;;) {
      index_.emplace(cur, monos_.size());
      monos_.push_back(cur);
      int k = degree - 1;
      while (k >= 0 && cur[static_cast<std::size_t>(k)] == static_cast<int>(vars) - 1) --k;
      if (k < 0) break;
      const int v = cur[static_cast<std::size_t>(k)] + 1;
      for (int j = k; j < degree; ++j) cur[static_cast<std::size_t>(j)] = v;
    }
  }
  std::size_t size() const { return monos_.size(); }
  std::size_t vars() const { return vars_; }
  int degree() const { return degree_; }
  const std::vector<int>& monomial(std::size_t i) const { return monos_[i]; }
  std::size_t index_of(std::vector<int> m) const {
    std::sort(m.begin(), m.end());
    auto it = index_.find(m);
    require(it != index_.end(), "MonomialBasis: not a monomial of this degree");
    return it->second;
  }

 private:
  std::size_t vars_;
  int degree_;
  std::vector<std::vector<int>> monos_;
  std::map<std::vector<int>, std::size_t> index_;
};

/// rho_n on the monomial basis: the product of the images of the factors, expanded.
inline ActionMatrix sym_power(const ActionMatrix& rho, const MonomialBasis& mb, bool force_expand = false) {
  const i64 M = rho.modulus();
  if (rho.is_monomial() && !force_expand) {
    const auto& cols = rho.columns();
    std::vector<std::pair<std::size_t, i64>> out;
    out.reserve(mb.size());
    std::vector<int> img(static_cast<std::size_t>(mb.degree()));
    for (std::size_t c = 0; c < mb.size(); ++c) {
      i64 e = 0;
      const auto& m = mb.monomial(c);
      for (std::size_t k = 0; k < m.size(); ++k) {
        const auto& [r, x] = cols[static_cast<std::size_t>(m[k])];
        img[k] = static_cast<int>(r);
        e += x;
      }
      out.emplace_back(mb.index_of(img), e);
    }
    return ActionMatrix::monomial(M, std::move(out));
  }
  const std::size_t n = mb.size();
  std::vector<CycloNum> entries(n * n, CycloNum(M));
  for (std::size_t c = 0; c < n; ++c) {
    std::map<std::vector<int>, CycloNum> acc{{{}, CycloNum::one(M)}};
    for (int var : mb.monomial(c)) {
      std::map<std::vector<int>, CycloNum> next;
      for (const auto& [mono, coef] : acc)
        for (std::size_t r = 0; r < rho.size(); ++r) {
          CycloNum x = rho.entry(r, static_cast<std::size_t>(var));
          if (x.is_zero()) continue;
          auto m2 = mono;
          m2.push_back(static_cast<int>(r));
          std::sort(m2.begin(), m2.end());
          auto [it, fresh] = next.emplace(m2, coef * x);
          if (!fresh) it->second += coef * x;
        }
      acc = std::move(next);
    }
    for (const auto& [mono, coef] : acc) entries[mb.index_of(mono) * n + c] = coef;
  }
  return ActionMatrix::dense(n, M, std::move(entries));
}

using CycloVec = std::vector<CycloNum>;

/// rho_n(g) sigma_d(a): the coordinates of (sum a_m m) o g.
inline CycloVec act(const ActionMatrix& rn, i64 d, const CycloVec& a) {
  const i64 M = rn.modulus();
  CycloVec out(a.size(), CycloNum(M));
  if (rn.is_monomial()) {
    const auto& cols = rn.columns();
    for (std::size_t c = 0; c < a.size(); ++c)
      if (!a[c].is_zero()) out[cols[c].first] = a[c].galois_shift(d, cols[c].second);
    return out;
  }
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a[c].is_zero()) continue;
    CycloNum s = a[c].galois(d);
    for (std::size_t r = 0; r < a.size(); ++r) {
      CycloNum x = rn.entry(r, c);
      if (!x.is_zero()) out[r] += x * s;
    }
  }
  return out;
}

/// A homogeneous polynomial in the labels of a function basis, coefficients in Q(zeta_M).
class InvariantPolynomial {
 public:
  InvariantPolynomial() = default;
  InvariantPolynomial(std::string basis_name, std::vector<std::string> labels, i64 M, int degree)
      : basis_(std::move(basis_name)), labels_(std::move(labels)), M_(M), degree_(degree) {}

  static InvariantPolynomial from_coords(const FunctionBasis& fb, const MonomialBasis& mb, const CycloVec& v) {
    InvariantPolynomial p(fb.name(), fb.labels(), fb.level(), mb.degree());
    for (std::size_t i = 0; i < mb.size(); ++i)
      if (!v[i].is_zero()) p.terms_.emplace(mb.monomial(i), v[i]);
    return p;
  }

  CycloVec coords(const MonomialBasis& mb) const {
    require(mb.degree() == degree_ && mb.vars() == labels_.size(), "InvariantPolynomial: basis mismatch");
    CycloVec v(mb.size(), CycloNum(M_));
    for (const auto& [m, c] : terms_) v[mb.index_of(m)] = c;
    return v;
  }

  const std::string& basis_name() const { return basis_; }
  const std::vector<std::string>& labels() const { return labels_; }
  i64 level() const { return M_; }
  int degree() const { return degree_; }
  const std::map<std::vector<int>, CycloNum>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(std::vector<int> mono, const CycloNum& c) {
    require(static_cast<int>(mono.size()) == degree_, "InvariantPolynomial: term of the wrong degree");
    require(c.modulus() == M_, "InvariantPolynomial: coefficient modulus differs");
    std::sort(mono.begin(), mono.end());
    auto [it, fresh] = terms_.emplace(mono, c);
    if (!fresh) it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  InvariantPolynomial scaled(const mpq_class& q) const {
    InvariantPolynomial r = *this;
    r.terms_.clear();
    if (q != 0)
      for (const auto& [m, c] : terms_) r.terms_.emplace(m, c.scaled(q));
    return r;
  }
  friend InvariantPolynomial operator+(const InvariantPolynomial& a, const InvariantPolynomial& b) {
    require(a.basis_ == b.basis_ && a.degree_ == b.degree_, "InvariantPolynomial: incompatible sum");
    InvariantPolynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend bool operator==(const InvariantPolynomial& a, const InvariantPolynomial& b) {
    return a.basis_ == b.basis_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  /// `(coeff)*g0*g2 + (z^6)*g1*g3`, z = zeta_M.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      os << (first ? "" : " + ") << "(" << c.to_string() << ")";
      first = false;
      for (std::size_t k = 0; k < m.size();) {
        std::size_t j = k;
        while (j < m.size() && m[j] == m[k]) ++j;
        os << "*" << labels_[static_cast<std::size_t>(m[k])];
        if (j - k > 1) os << "^" << (j - k);
        k = j;
      }
    }
    return os.str();
  }

  static InvariantPolynomial parse(const FunctionBasis& fb, const std::string& text) {
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    const i64 M = fb.level();
    std::vector<std::pair<int, std::string>> pieces;  // sign, body
    int depth = 0, sign = 1;
    std::string cur;
    for (char ch : s) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (depth < 0) fail(ErrorKind::BadInput, "unbalanced parentheses in polynomial");
      if (depth == 0 && (ch == '+' || ch == '-')) {
        if (!cur.empty()) pieces.emplace_back(sign, cur);
        cur.clear();
        sign = ch == '-' ? -1 : 1;
        continue;
      }
      cur += ch;
    }
    if (depth != 0) fail(ErrorKind::BadInput, "unbalanced parentheses in polynomial");
    if (!cur.empty()) pieces.emplace_back(sign, cur);
    if (pieces.empty()) fail(ErrorKind::BadInput, "empty polynomial");
    std::optional<InvariantPolynomial> out;
    for (auto& [sg, body] : pieces) {
      CycloNum coef = CycloNum::one(M);
      std::string rest = body;
      if (!rest.empty() && rest[0] == '(') {
        const auto close = rest.find(')');
        coef = CycloNum::parse(M, rest.substr(1, close - 1));
        rest = rest.substr(close + 1);
        if (!rest.empty() && rest[0] == '*') rest = rest.substr(1);
      } else {
        // leading rational factor such as 3/2*g0
        static const std::regex num(R"(^(\d+(?:/\d+)?)\*)");
        std::smatch m;
        if (std::regex_search(rest, m, num)) {
          mpq_class q(m[1].str());
          q.canonicalize();
          coef = CycloNum(M, q);
          rest = rest.substr(static_cast<std::size_t>(m.length(0)));
        }
      }
      std::vector<int> mono;
      std::stringstream ss(rest);
      std::string factor;
      while (std::getline(ss, factor, '*')) {
        if (factor.empty()) fail(ErrorKind::BadInput, "empty factor in polynomial term '" + body + "'");
        int e = 1;
        const auto caret = factor.find('^');
        if (caret != std::string::npos) {
          e = std::stoi(factor.substr(caret + 1));
          factor = factor.substr(0, caret);
        }
        const int idx = static_cast<int>(fb.index_of(factor));
        for (int k = 0; k < e; ++k) mono.push_back(idx);
      }
      if (mono.empty()) fail(ErrorKind::BadInput, "constant term in a homogeneous polynomial");
      if (!out) out.emplace(fb.name(), fb.labels(), M, static_cast<int>(mono.size()));
      if (static_cast<int>(mono.size()) != out->degree()) fail(ErrorKind::BadInput, "polynomial is not homogeneous");
      out->add_term(mono, sg < 0 ? -coef : coef);
    }
    return *out;
  }

  nlohmann::json to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : terms_) {
      std::vector<std::string> mono;
      for (int i : m) mono.push_back(labels_[static_cast<std::size_t>(i)]);
      terms.push_back({{"monomial", mono}, {"coeff", c.to_string()}});
    }
    return {{"basis", basis_}, {"level", M_}, {"degree", degree_}, {"text", to_string()}, {"terms", terms}};
  }

 private:
  std::string basis_;
  std::vector<std::string> labels_;
  i64 M_ = 1;
  int degree_ = 1;
  std::map<std::vector<int>, CycloNum> terms_;
};

/// V_n as a canonical (RREF) basis over Q(zeta_M) in monomial coordinates.
struct InvariantSpace {
  std::shared_ptr<const MonomialBasis> mono;
  std::vector<CycloVec> vectors;
  std::vector<std::size_t> pivots;

  std::size_t dim() const { return vectors.size(); }

  /// Coordinates of v in this basis, or nothing if v is outside the span.
  std::optional<CycloVec> coordinates(const CycloVec& v) const {
    const i64 M = v.front().modulus();
    CycloVec c;
    CycloVec rest = v;
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      c.push_back(v[pivots[j]]);
      if (c.back().is_zero()) continue;
      for (std::size_t i = 0; i < rest.size(); ++i)
        if (!vectors[j][i].is_zero()) rest[i] -= c.back() * vectors[j][i];
    }
    for (const auto& x : rest)
      if (!x.is_zero()) return std::nullopt;
    (void)M;
    return c;
  }
  bool contains(const CycloVec& v) const { return coordinates(v).has_value(); }
};

namespace detail {

inline InvariantSpace canonical_space(std::shared_ptr<const MonomialBasis> mb, const std::vector<CycloVec>& gens, i64 M) {
  InvariantSpace sp;
  sp.mono = std::move(mb);
  const CycloNum zero(M);
  if (gens.empty()) return sp;
  sp.vectors = row_space_basis(gens, sp.mono->size(), zero);
  for (const auto& v : sp.vectors) {
    std::size_t p = 0;
    while (v[p].is_zero()) ++p;
    sp.pivots.push_back(p);
  }
  return sp;
}

}  // namespace detail

enum class InvariantMethod { Reynolds, Nullspace };

/// Fixed space of rho_n on H. Reynolds averages over all of H; Nullspace intersects ker(rho_n(h) - 1)
/// over generators of H.
inline InvariantSpace h_invariants(const ReciprocityGroup& G, const FunctionBasis& fb, int n, InvariantMethod method) {
  const i64 M = fb.level();
  require(G.M == M, "h_invariants: group level differs from the basis level");
  auto mb = std::make_shared<const MonomialBasis>(fb.size(), n);
  const std::size_t dim = mb->size();
  std::vector<CycloVec> gens;
  if (method == InvariantMethod::Reynolds) {
    // column c of sum_h rho_n(h), accumulated as root-of-unity counts
    std::vector<std::vector<i64>> counts(dim * dim);
    std::vector<CycloVec> dense_sum;
    for (const auto& h : G.H) {
      ActionMatrix rn = sym_power(fb.action_of(h), *mb);
      if (rn.is_monomial()) {
        const auto& cols = rn.columns();
        for (std::size_t c = 0; c < dim; ++c) {
          auto& cnt = counts[cols[c].first * dim + c];
          if (cnt.empty()) cnt.assign(static_cast<std::size_t>(M), 0);
          ++cnt[static_cast<std::size_t>(mod(cols[c].second, M))];
        }
      } else {
        if (dense_sum.empty()) dense_sum.assign(dim, CycloVec(dim, CycloNum(M)));
        for (std::size_t c = 0; c < dim; ++c)
          for (std::size_t r = 0; r < dim; ++r) dense_sum[c][r] += rn.entry(r, c);
      }
    }
    for (std::size_t c = 0; c < dim; ++c) {
      CycloVec v(dim, CycloNum(M));
      for (std::size_t r = 0; r < dim; ++r) {
        const auto& cnt = counts[r * dim + c];
        if (!cnt.empty()) {
          std::map<i64, mpq_class> t;
          for (i64 k = 0; k < M; ++k)
            if (cnt[static_cast<std::size_t>(k)]) t[k] = mpq_class(cnt[static_cast<std::size_t>(k)]);
          v[r] = CycloNum::from_exponents(M, t);
        }
        if (!dense_sum.empty()) v[r] += dense_sum[c][r];
      }
      bool nz = false;
      for (const auto& x : v) nz = nz || !x.is_zero();
      if (nz) gens.push_back(std::move(v));
    }
  } else {
    const CycloNum zero(M);
    std::vector<CycloVec> rows;
    for (const auto& h : G.h_generators) {
      ActionMatrix rn = sym_power(fb.action_of(h), *mb);
      for (std::size_t r = 0; r < dim; ++r) {
        CycloVec row(dim, zero);
        for (std::size_t c = 0; c < dim; ++c) row[c] = rn.entry(r, c);
        row[r] -= CycloNum::one(M);
        rows.push_back(std::move(row));
      }
    }
    if (rows.empty()) {
      for (std::size_t i = 0; i < dim; ++i) {
        CycloVec e(dim, zero);
        e[i] = CycloNum::one(M);
        gens.push_back(std::move(e));
      }
    } else {
      Matrix<CycloNum> A(rows.size(), dim, zero);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j) A(i, j) = rows[i][j];
      gens = nullspace(A, zero);
    }
  }
  return detail::canonical_space(mb, gens, M);
}

/// Both methods; they must give the same space.
inline InvariantSpace h_invariants(const ReciprocityGroup& G, const FunctionBasis& fb, int n) {
  InvariantSpace a = h_invariants(G, fb, n, InvariantMethod::Nullspace);
  InvariantSpace b = h_invariants(G, fb, n, InvariantMethod::Reynolds);
  if (a.vectors != b.vectors) fail(ErrorKind::Verification, "Reynolds and nullspace invariant spaces differ");
  return a;
}

inline int min_degree(const ReciprocityGroup& G, const FunctionBasis& fb, int n_max) {
  require(n_max >= 1, "min_degree: n_max must be positive");
  for (int n = 1; n <= n_max; ++n)
    if (h_invariants(G, fb, n, InvariantMethod::Nullspace).dim() > 0) return n;
  fail(ErrorKind::Verification, "no H-invariant polynomial of degree <= " + std::to_string(n_max));
}

/// R(g) for each coset representative: rho_n(g) sigma_d(V) = V R(g) on the basis of V_n.
struct CocycleOnVn {
  i64 M = 0;
  std::size_t dim = 0;
  std::map<i64, Matrix<CycloNum>> R;
};

inline CocycleOnVn cocycle_on(const ReciprocityGroup& G, const FunctionBasis& fb, const InvariantSpace& V) {
  CocycleOnVn c;
  c.M = G.M;
  c.dim = V.dim();
  const CycloNum zero(G.M);
  for (const auto& [d, g] : G.coset_reps) {
    ActionMatrix rn = sym_power(fb.action_of(g), *V.mono);
    Matrix<CycloNum> R(V.dim(), V.dim(), zero);
    for (std::size_t j = 0; j < V.dim(); ++j) {
      auto coords = V.coordinates(act(rn, d, V.vectors[j]));
      if (!coords) fail(ErrorKind::Verification, "V_n is not stable under the reciprocity group");
      for (std::size_t i = 0; i < V.dim(); ++i) R(i, j) = (*coords)[i];
    }
    c.R.emplace(d, std::move(R));
  }
  return c;
}

inline Matrix<CycloNum> galois(const Matrix<CycloNum>& m, i64 d) {
  Matrix<CycloNum> out = m;
  for (auto& x : out.data()) x = x.galois(d);
  return out;
}

/// R(st) = R(t) R(s)^t over all pairs of coset classes.
inline bool cocycle_holds(const CocycleOnVn& c) {
  for (const auto& [s, Rs] : c.R)
    for (const auto& [t, Rt] : c.R) {
      auto it = c.R.find(mod(s * t, c.M));
      if (it == c.R.end()) return false;
      if (!(it->second == Rt * galois(Rs, t))) return false;
    }
  return true;
}

struct Hilbert90Split {
  Matrix<CycloNum> BQ;  // sum_s R(s) s(Q); its columns are fixed
  Matrix<CycloNum> P;   // BQ^{-1}
  int attempts = 0;
  std::uint64_t seed = 0;
  /// Which splitting identity holds for every class.
  bool left_form = false;   // R(s) = P^{-1} P^s
  bool right_form = false;  // R(s) = P^s P^{-1}
  std::string convention() const {
    if (left_form && right_form) return "R(s) = P^-1 P^s = P^s P^-1";
    return left_form ? "R(s) = P^-1 P^s" : "R(s) = P^s P^-1";
  }
};

inline Matrix<CycloNum> random_cyclo_matrix(std::mt19937_64& rng, std::size_t n, i64 M) {
  std::uniform_int_distribution<int> u(-5, 5);
  const int phi = cyclo_context(M)->phi();
  Matrix<CycloNum> Q(n, n, CycloNum(M));
  for (auto& x : Q.data()) {
    std::vector<mpq_class> coords(static_cast<std::size_t>(phi));
    for (auto& q : coords) q = u(rng);
    x = CycloNum::from_coords(M, coords);
  }
  return Q;
}

inline Hilbert90Split hilbert90_split(const CocycleOnVn& c, std::uint64_t seed, int max_attempts = 10) {
  const CycloNum zero(c.M);
  std::mt19937_64 rng(seed);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    Matrix<CycloNum> Q = random_cyclo_matrix(rng, c.dim, c.M);
    Matrix<CycloNum> B(c.dim, c.dim, zero);
    for (const auto& [d, R] : c.R) {
      Matrix<CycloNum> term = R * galois(Q, d);
      for (std::size_t i = 0; i < B.data().size(); ++i) B.data()[i] += term.data()[i];
    }
    auto P = inverse(B, zero);
    if (!P) continue;
    Hilbert90Split out;
    out.BQ = B;
    out.P = *P;
    out.attempts = attempt;
    out.seed = seed;
    out.left_form = out.right_form = true;
    for (const auto& [d, R] : c.R) {
      const Matrix<CycloNum> Pd = galois(*P, d);
      out.left_form = out.left_form && (*P * R == Pd);   // P R = P^s  <=>  R = P^-1 P^s
      out.right_form = out.right_form && (R * *P == Pd);  // R P = P^s  <=>  R = P^s P^-1
    }
    if (!out.left_form && !out.right_form) fail(ErrorKind::Verification, "hilbert90_split: no splitting identity holds");
    return out;
  }
  fail(ErrorKind::Verification, "hilbert90_split: B_Q singular in every attempt");
}

/// Q-basis of the subfield of Q(zeta_M) fixed by {sigma_d : d in image}, from traces of powers of zeta.
inline std::vector<CycloNum> fixed_field_basis(i64 M, const std::vector<i64>& image) {
  const int phi = cyclo_context(M)->phi();
  std::vector<std::vector<mpq_class>> rows;
  for (int i = 0; i < phi; ++i) {
    RootAccumulator acc(M);
    for (i64 d : image) acc.add(d * i, 1);
    rows.push_back(acc.value().coords());
  }
  std::vector<CycloNum> out;
  for (auto& r : row_space_basis(rows, static_cast<std::size_t>(phi), mpq_class(0))) out.push_back(CycloNum::from_coords(M, r));
  return out;
}

/// Scales v so that all coordinates are integers with gcd 1 and the first nonzero one is positive.
inline CycloVec primitive_integral(const CycloVec& v) {
  mpz_class l = 1, g = 0;
  for (const auto& x : v) l = lcm(l, x.denominator());
  for (const auto& x : v)
    for (const auto& z : x.numerators()) g = gcd(g, z * (l / x.denominator()));
  if (g == 0) return v;
  mpq_class s(l, g);
  s.canonicalize();
  for (const auto& x : v) {
    const auto& nums = x.numerators();
    auto it = std::find_if(nums.begin(), nums.end(), [](const mpz_class& z) { return z != 0; });
    if (it == nums.end()) continue;
    if (*it < 0) s = -s;
    break;
  }
  CycloVec out;
  for (const auto& x : v) out.push_back(x.scaled(s));
  return out;
}

struct DescentResult {
  std::shared_ptr<const FunctionBasis> basis;
  int degree = 0;
  InvariantSpace V;
  CocycleOnVn cocycle;
  Hilbert90Split split;
  std::vector<i64> det_image;
  std::size_t fixed_field_degree = 1;
  /// Canonical Q-basis (rational RREF, then primitive integral) of the class invariants.
  std::vector<CycloVec> vectors;

  std::vector<InvariantPolynomial> invariants() const {
    std::vector<InvariantPolynomial> out;
    for (const auto& v : vectors) out.push_back(InvariantPolynomial::from_coords(*basis, *V.mono, v));
    return out;
  }
};

/// rho_n(g) sigma_det(w) = w for every g in `elems`.
inline bool fixed_by(const FunctionBasis& fb, const MonomialBasis& mb, const std::vector<ResidueMatrix>& elems, const CycloVec& w) {
  for (const auto& g : elems)
    if (act(sym_power(fb.action_of(g), mb), g.det(), w) != w) return false;
  return true;
}

/// Symbolic check of the class-invariant criterion over all of W (or its generators).
inline bool verify_class_invariant(const InvariantPolynomial& p, const FunctionBasis& fb, const ReciprocityGroup& G, bool generators_only = false) {
  if (p.is_zero()) return false;
  MonomialBasis mb(fb.size(), p.degree());
  return fixed_by(fb, mb, generators_only ? G.generators : G.elements, p.coords(mb));
}

inline DescentResult class_invariant_basis(const ReciprocityGroup& G, std::shared_ptr<const FunctionBasis> fb, int n, std::uint64_t seed) {
  DescentResult r;
  r.basis = fb;
  r.degree = n;
  r.V = h_invariants(G, *fb, n);
  if (r.V.dim() == 0) fail(ErrorKind::Verification, "V_" + std::to_string(n) + " is zero");
  r.cocycle = cocycle_on(G, *fb, r.V);
  if (!cocycle_holds(r.cocycle)) fail(ErrorKind::Verification, "cocycle relation fails on V_n");
  r.split = hilbert90_split(r.cocycle, seed);
  r.det_image = G.det_image();
  const i64 M = G.M;
  const std::size_t dim = r.V.mono->size();

  // descended vectors: V times the columns of B_Q, then times a Q-basis of the fixed field
  std::vector<CycloVec> desc;
  for (std::size_t j = 0; j < r.V.dim(); ++j) {
    CycloVec w(dim, CycloNum(M));
    for (std::size_t i = 0; i < r.V.dim(); ++i) {
      const CycloNum& b = r.split.BQ(i, j);
      if (b.is_zero()) continue;
      for (std::size_t k = 0; k < dim; ++k)
        if (!r.V.vectors[i][k].is_zero()) w[k] += b * r.V.vectors[i][k];
    }
    desc.push_back(std::move(w));
  }
  auto F = fixed_field_basis(M, r.det_image);
  r.fixed_field_degree = F.size();
  const int phi = cyclo_context(M)->phi();
  std::vector<std::vector<mpq_class>> flat;
  for (const auto& f : F)
    for (const auto& w : desc) {
      std::vector<mpq_class> row;
      row.reserve(dim * static_cast<std::size_t>(phi));
      for (const auto& x : w) {
        auto c = (f * x).coords();
        row.insert(row.end(), c.begin(), c.end());
      }
      flat.push_back(std::move(row));
    }
  for (const auto& row : row_space_basis(flat, dim * static_cast<std::size_t>(phi), mpq_class(0))) {
    CycloVec v;
    for (std::size_t k = 0; k < dim; ++k)
      v.push_back(CycloNum::from_coords(M, std::vector<mpq_class>(row.begin() + static_cast<std::ptrdiff_t>(k * phi),
                                                                  row.begin() + static_cast<std::ptrdiff_t>((k + 1) * phi))));
    r.vectors.push_back(primitive_integral(v));
  }
  for (const auto& v : r.vectors)
    if (!fixed_by(*fb, *r.V.mono, G.elements, v)) fail(ErrorKind::Verification, "descended vector is not fixed by the reciprocity group");
  return r;
}

/// Membership of a polynomial in the Q-span of the descended basis.
inline std::optional<std::vector<mpq_class>> rational_coordinates(const DescentResult& r, const InvariantPolynomial& p) {
  const std::size_t dim = r.V.mono->size();
  const int phi = r.vectors.empty() ? 0 : r.vectors.front().front().phi();
  auto flatten = [&](const CycloVec& v) {
    std::vector<mpq_class> row;
    for (const auto& x : v) {
      auto c = x.coords();
      row.insert(row.end(), c.begin(), c.end());
    }
    return row;
  };
  std::vector<std::vector<mpq_class>> cols;
  for (const auto& v : r.vectors) cols.push_back(flatten(v));
  Matrix<mpq_class> A = Matrix<mpq_class>::from_columns(cols, dim * static_cast<std::size_t>(phi), mpq_class(0));
  return solve(A, flatten(p.coords(*r.V.mono)), mpq_class(0));
}

}  // namespace classinv
