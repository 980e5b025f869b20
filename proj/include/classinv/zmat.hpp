#pragma once

// 2x2 matrices over Z/MZ and words in the generators S = (0 1; -1 0), T = (1 1; 0 1).

#include <array>
#include <cstdint>
#include <functional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "classinv/arith.hpp"
#include "classinv/error.hpp"

namespace classinv {

/// Element of M_2(Z/MZ), row-major (a b; c d), entries reduced to [0, M).
class ResidueMatrix {
 public:
  ResidueMatrix() = default;
  ResidueMatrix(i64 a, i64 b, i64 c, i64 d, i64 modulus) : modulus_(modulus) {
    require(modulus >= 1, "ResidueMatrix: modulus must be positive");
    e_ = {mod(a, modulus), mod(b, modulus), mod(c, modulus), mod(d, modulus)};
  }

  static ResidueMatrix identity(i64 modulus) { return {1, 0, 0, 1, modulus}; }
  static ResidueMatrix S(i64 modulus) { return {0, 1, -1, 0, modulus}; }
  static ResidueMatrix T(i64 modulus, i64 k = 1) { return {1, k, 0, 1, modulus}; }
  static ResidueMatrix diag(i64 x, i64 y, i64 modulus) { return {x, 0, 0, y, modulus}; }

  i64 a() const { return e_[0]; }
  i64 b() const { return e_[1]; }
  i64 c() const { return e_[2]; }
  i64 d() const { return e_[3]; }
  i64 modulus() const { return modulus_; }
  const std::array<i64, 4>& entries() const { return e_; }

  i64 det() const { return mod(e_[0] * e_[3] - e_[1] * e_[2], modulus_); }
  bool invertible() const { return is_unit(det(), modulus_); }
  bool is_identity() const { return e_[0] == mod(1, modulus_) && e_[1] == 0 && e_[2] == 0 && e_[3] == mod(1, modulus_); }

  ResidueMatrix inverse() const {
    i64 di = inv_mod(det(), modulus_);
    return {e_[3] * di, -e_[1] * di, -e_[2] * di, e_[0] * di, modulus_};
  }

  /// Reduction to a divisor of the modulus.
  ResidueMatrix reduce(i64 m) const {
    require(m >= 1 && modulus_ % m == 0, "ResidueMatrix::reduce: not a divisor of the modulus");
    return {e_[0], e_[1], e_[2], e_[3], m};
  }

  friend bool operator==(const ResidueMatrix&, const ResidueMatrix&) = default;
  friend auto operator<=>(const ResidueMatrix&, const ResidueMatrix&) = default;

  std::string to_string() const {
    std::ostringstream os;
    os << "(" << e_[0] << "," << e_[1] << ";" << e_[2] << "," << e_[3] << ")";
    return os.str();
  }
  friend std::ostream& operator<<(std::ostream& os, const ResidueMatrix& m) { return os << m.to_string(); }

 private:
  std::array<i64, 4> e_{1, 0, 0, 1};
  i64 modulus_ = 1;
};

inline ResidueMatrix mat_mul(const ResidueMatrix& x, const ResidueMatrix& y) {
  require(x.modulus() == y.modulus(), "mat_mul: modulus mismatch");
  const i64 m = x.modulus();
  // residues are < 2^31 for every level used here, so the products fit
  return {(x.a() * y.a() + x.b() * y.c()) % m, (x.a() * y.b() + x.b() * y.d()) % m,
          (x.c() * y.a() + x.d() * y.c()) % m, (x.c() * y.b() + x.d() * y.d()) % m, m};
}

inline ResidueMatrix operator*(const ResidueMatrix& x, const ResidueMatrix& y) { return mat_mul(x, y); }

inline ResidueMatrix mat_pow(ResidueMatrix x, i64 e) {
  if (e < 0) {
    x = x.inverse();
    e = -e;
  }
  ResidueMatrix r = ResidueMatrix::identity(x.modulus());
  while (e > 0) {
    if (e & 1) r = r * x;
    x = x * x;
    e >>= 1;
  }
  return r;
}

enum class Gen { S, T };

struct Letter {
  Gen gen;
  i64 exp;
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A word S^e1 T^f1 ...; evaluation is the left-to-right matrix product.
class STWord {
 public:
  STWord() = default;
  explicit STWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  /// Appends a letter, merging with a trailing letter of the same generator.
  void append(Gen g, i64 e) {
    if (e == 0) return;
    if (!letters_.empty() && letters_.back().gen == g) {
      letters_.back().exp += e;
      if (letters_.back().exp == 0) letters_.pop_back();
      return;
    }
    letters_.push_back({g, e});
  }

  /// Merged form with S exponents in {-1, 1, 2} and T exponents in (-M/2, M/2].
  STWord normalized(i64 modulus) const {
    STWord out;
    for (const auto& l : letters_) {
      out.append(l.gen, l.exp);
      if (!out.letters_.empty()) {
        auto& back = out.letters_.back();
        back.exp = back.gen == Gen::S ? balanced_mod(back.exp, 4) : balanced_mod(back.exp, modulus);
        if (back.exp == 0) out.letters_.pop_back();
      }
    }
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& l : letters_) {
      if (!s.empty()) s += ' ';
      s += l.gen == Gen::S ? 'S' : 'T';
      if (l.exp != 1) s += "^" + std::to_string(l.exp);
    }
    return s;
  }

  friend bool operator==(const STWord&, const STWord&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Parses "S^-1 T^41 S", "S^{-1}·T^{41}·S" or "S^{-1} . T^{41} . S".
inline STWord parse_word(const std::string& text) {
  static const std::regex tok(R"(([ST])(?:\^\{?(-?\d+)\}?)?)");
  STWord w;
  std::string rest;
  for (char ch : text)
    if (ch == 'S' || ch == 'T' || ch == '^' || ch == '{' || ch == '}' || ch == '-' || (ch >= '0' && ch <= '9'))
      rest += ch;
    else
      rest += ' ';
  std::istringstream is(rest);
  // tokens may be glued ("ST^2"), so scan with the regex instead of splitting on blanks
  for (auto it = std::sregex_iterator(rest.begin(), rest.end(), tok); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    i64 e = m[2].matched ? std::stoll(m[2].str()) : 1;
    w.append(m[1].str() == "S" ? Gen::S : Gen::T, e);
  }
  return w;
}

inline ResidueMatrix eval_word(const STWord& w, i64 modulus) {
  ResidueMatrix r = ResidueMatrix::identity(modulus);
  for (const auto& l : w.letters())
    r = r * (l.gen == Gen::S ? mat_pow(ResidueMatrix::S(modulus), mod(l.exp, 4)) : ResidueMatrix::T(modulus, l.exp));
  return r;
}

/// Integer 2x2 matrix (for lifts to SL(2,Z) used by numeric checks).
using IntMatrix = std::array<i64, 4>;

inline IntMatrix int_mul(const IntMatrix& x, const IntMatrix& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

/// Evaluates a word over Z. Only sensible for short words with small exponents.
inline IntMatrix eval_word_integer(const STWord& w) {
  IntMatrix r{1, 0, 0, 1};
  for (const auto& l : w.letters()) {
    if (l.gen == Gen::T) {
      r = int_mul(r, IntMatrix{1, l.exp, 0, 1});
    } else {
      for (i64 k = 0; k < mod(l.exp, 4); ++k) r = int_mul(r, IntMatrix{0, 1, -1, 0});
    }
  }
  return r;
}

/// Euclidean row reduction: lifts the first column to coprime integers, clears it with
/// left multiplications by T^k and S, then finishes with S^2 and a final T power.
inline STWord decompose_st(const ResidueMatrix& m) {
  const i64 M = m.modulus();
  require(m.det() == mod(1, M), "decompose_st: determinant is not 1 mod M");
  if (M == 1) return {};

  i64 A = m.a();
  i64 C = m.c() == 0 ? M : m.c();
  while (std::gcd(A, C) != 1) A += M;

  // ops are applied on the left, in order: X <- L_k ... L_1 m
  std::vector<Letter> ops;
  ResidueMatrix X = m;
  while (C != 0) {
    i64 q = A / C;
    if (A - q * C < 0) --q;  // floor for negative A
    if (q != 0) {
      ops.push_back({Gen::T, -q});
      X = ResidueMatrix::T(M, -q) * X;
      A -= q * C;
    }
    ops.push_back({Gen::S, 1});
    X = ResidueMatrix::S(M) * X;
    std::tie(A, C) = std::make_pair(C, -A);
  }
  if (X.a() != mod(1, M)) {
    ops.push_back({Gen::S, 2});
    X = mat_pow(ResidueMatrix::S(M), 2) * X;
  }
  if (!(X.a() == mod(1, M) && X.c() == 0 && X.d() == mod(1, M)))
    fail(ErrorKind::Verification, "decompose_st: reduction did not reach an upper unipotent matrix");

  // m = L_1^{-1} L_2^{-1} ... L_k^{-1} T^x
  STWord w;
  for (const auto& l : ops) w.append(l.gen, -l.exp);
  w.append(Gen::T, X.b());
  return w.normalized(M);
}

struct DetSplit {
  i64 d;                // det(m)
  ResidueMatrix sl2;    // det 1 part b with m = b * diag(1, d)
};

inline DetSplit split_det(const ResidueMatrix& m) {
  const i64 M = m.modulus();
  i64 d = m.det();
  require(is_unit(d, M), "split_det: determinant is not a unit");
  i64 di = inv_mod(d, M);
  return {d, ResidueMatrix(m.a(), m.b() * di, m.c(), m.d() * di, M)};
}

/// X with X ≡ target mod p^v and X ≡ I mod M/p^v, where p^v || M.
inline ResidueMatrix crt_lift(i64 p, const ResidueMatrix& target_mod_pv, i64 M) {
  require(p >= 2 && M % p == 0, "crt_lift: p does not divide M");
  i64 q = 1;
  while (M % (q * p) == 0) q *= p;
  const i64 r = M / q;
  // e ≡ x mod q, e ≡ y mod r
  const i64 rinv = r == 1 ? 0 : inv_mod(r, q);
  auto crt = [&](i64 x, i64 y) {
    if (r == 1) return mod(x, M);
    i64 t = mod((x - y) % q * rinv, q);
    return mod(y + r * t, M);
  };
  const auto& e = target_mod_pv.entries();
  const std::array<i64, 4> id{1, 0, 0, 1};
  return {crt(e[0], id[0]), crt(e[1], id[1]), crt(e[2], id[2]), crt(e[3], id[3]), M};
}

struct GeneratorLift {
  ResidueMatrix S_p;
  ResidueMatrix T_p;
};

/// Local generators at p: S_p reduces to S^{-1} = (0 -1; 1 0) and T_p to T modulo p^v,
/// both reduce to the identity modulo M/p^v, e.g. S_7 = (49 48; 120 49) for M = 168.
inline GeneratorLift crt_lift_generators(i64 p, i64 M) {
  require(p >= 2 && M % p == 0, "crt_lift_generators: p does not divide M");
  i64 q = 1;
  while (M % (q * p) == 0) q *= p;
  return {crt_lift(p, ResidueMatrix(0, -1, 1, 0, q), M), crt_lift(p, ResidueMatrix(1, 1, 0, 1, q), M)};
}

}  // namespace classinv

template <>
struct std::hash<classinv::ResidueMatrix> {
  std::size_t operator()(const classinv::ResidueMatrix& m) const noexcept {
    std::size_t h = static_cast<std::size_t>(m.modulus());
    for (auto v : m.entries()) h = h * 1000003u ^ static_cast<std::size_t>(v);
    return h;
  }
};
