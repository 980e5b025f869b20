#include <gtest/gtest.h>

#include <random>

#include "classinv/weber.hpp"

using namespace classinv;

namespace {

constexpr int kDigits = 50;

std::vector<Complex> sample_points() {
  PrecisionScope ps(kDigits + 20);
  using boost::multiprecision::sqrt;
  return {Complex(Real(1) / 4, sqrt(Real(7)) / 4), Complex(Real(-1) / 5, sqrt(Real(19)) / 5),
          Complex(Real(2) / 6, sqrt(Real(31)) / 6)};
}

bool tiny(const Real& r) {
  PrecisionScope ps(kDigits + 20);
  return r < epsilon_digits(40);
}

ResidueMatrix random_gl2(std::mt19937_64& rng, i64 M) {
  std::uniform_int_distribution<i64> u(0, M - 1);
  for (;;) {
    ResidueMatrix m(u(rng), u(rng), u(rng), u(rng), M);
    if (m.invertible()) return m;
  }
}

// sign of sigma_d on sqrt(N) times the i-twist used for N = 3 mod 4
i64 sigma_sign_exponent(i64 d, i64 N) {
  i64 s = legendre(d, N);
  if (N % 4 == 3 && mod(d, 4) == 3) s = -s;
  return s > 0 ? 0 : 12 * N;
}

}  // namespace

TEST(Weber, PrintedTRules) {
  for (i64 N : {3, 5, 7}) {
    auto b = FunctionBasis::nu(N);
    const i64 M = 24 * N;
    const auto& T = b->action_T();
    ASSERT_TRUE(T.is_monomial());
    EXPECT_EQ(T.entry(0, 0), CycloNum::root(M, N * (N - 1)));  // zeta_24^{N-1}
    for (i64 k = 0; k < N; ++k) {
      const std::size_t col = static_cast<std::size_t>(1 + k);
      const std::size_t row = static_cast<std::size_t>(1 + (k + 1) % N);
      EXPECT_EQ(T.entry(row, col), CycloNum::root(M, k + 1 < N ? -N : 0)) << N << " " << k;
    }
    ActionMatrix p = ActionMatrix::identity(b->size(), M);
    for (i64 k = 0; k < M; ++k) p = T * p;
    EXPECT_EQ(p, ActionMatrix::identity(b->size(), M));
  }
}

TEST(Weber, PrintedSRules) {
  for (i64 N : {3, 5, 7, 11}) {
    auto b = FunctionBasis::nu(N);
    const auto& S = b->action_S();
    EXPECT_EQ(S.entry(1, 0), CycloNum::one(24 * N));
    EXPECT_EQ(S.entry(0, 1), CycloNum::one(24 * N));
    EXPECT_EQ(S * S, ActionMatrix::identity(b->size(), 24 * N));
  }
  // (-2|5) = -1 and i^{-2} = -1, so nu_{2,5} o S = +nu_{2,5}; the numeric oracle agrees
  EXPECT_EQ(FunctionBasis::nu(5)->action_S().entry(3, 3), CycloNum::one(120));
}

TEST(Weber, ClosedFormSPhaseForNFiveAndSeven) {
  for (i64 N : {5, 7}) {
    auto b = FunctionBasis::nu(N);
    for (i64 k = 1; k < N; ++k) {
      const i64 c = mod(-inv_mod(k, N), N);
      EXPECT_EQ(b->action_S().entry(static_cast<std::size_t>(1 + c), static_cast<std::size_t>(1 + k)),
                CycloNum::root(24 * N, closed_form_S_phase(k, N)))
          << N << " " << k;
    }
  }
}

TEST(Weber, SigmaClosedForm) {
  for (i64 N : {5, 7}) {
    auto b = FunctionBasis::nu(N);
    const i64 M = 24 * N;
    for (i64 d : {7, 11, 13, 17, 23}) {
      if (!is_unit(d, M)) continue;
      auto a = b->action_sigma(d);
      EXPECT_EQ(a.entry(0, 0), CycloNum::root(M, sigma_sign_exponent(d, N))) << N << " " << d;
      for (i64 k = 0; k < N; ++k) {
        const i64 k2 = mod(d * k, N);
        EXPECT_EQ(a.entry(static_cast<std::size_t>(1 + k2), static_cast<std::size_t>(1 + k)), CycloNum::root(M, d * k - k2));
      }
    }
    EXPECT_EQ(b->action_sigma(1), ActionMatrix::identity(b->size(), M));
  }
}

TEST(Weber, G72RecognizedMatchesNuWithScalars) {
  auto g = FunctionBasis::g72();
  auto nu = FunctionBasis::nu(3);
  // g_i = zeta^{s_i} nu_{L(i)}: conjugate the nu action by the diagonal scalars and the relabelling
  const std::vector<std::size_t> under{1, 2, 3, 0};
  const std::vector<i64> scal{0, -3, 0, 0};
  for (i64 d : {5, 7, 11, 13, 35, 71}) {
    auto a = g->action_sigma(d), n = nu->action_sigma(d);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        CycloNum expect = n.entry(under[j], under[i]) * CycloNum::root(72, d * scal[i] - scal[j]);
        EXPECT_EQ(a.entry(j, i), expect) << d << " " << i << " " << j;
      }
  }
}

TEST(Weber, NumericOracle) {
  const auto pts = sample_points();
  const IntMatrix S{0, 1, -1, 0}, T{1, 1, 0, 1};
  for (auto b : {FunctionBasis::g72(), FunctionBasis::nu(5), FunctionBasis::nu(7)}) {
    for (const auto& tau : pts) {
      EXPECT_TRUE(tiny(b->numeric_residual(T, b->action_T(), tau, kDigits))) << b->name();
      EXPECT_TRUE(tiny(b->numeric_residual(S, b->action_S(), tau, kDigits))) << b->name();
      for (i64 d : {5, 7, 11, 13}) {
        if (!is_unit(d, b->level())) continue;
        EXPECT_TRUE(tiny(b->numeric_residual_sigma(d, tau, kDigits))) << b->name() << " d=" << d;
      }
    }
  }
}

TEST(Weber, NumericOracleOnWords) {
  const auto pts = sample_points();
  auto b = FunctionBasis::nu(5);
  for (const char* w : {"S T^2 S", "T S T^-1 S T^3", "S^-1 T^-2 S T"}) {
    auto word = parse_word(w);
    auto rho = b->action_of(eval_word(word, 120));
    EXPECT_TRUE(tiny(b->numeric_residual(integer_lift(word), rho, pts[0], kDigits))) << w;
  }
}

TEST(Weber, ActionOfBasics) {
  auto b = FunctionBasis::g72();
  EXPECT_EQ(b->action_of(ResidueMatrix::identity(72)), ActionMatrix::identity(4, 72));
  EXPECT_EQ(b->action_of(ResidueMatrix::S(72)), b->action_S());
  EXPECT_EQ(b->action_of(ResidueMatrix::T(72)), b->action_T());
  EXPECT_EQ(b->action_of(ResidueMatrix::diag(1, 5, 72)), b->action_sigma(5));
  EXPECT_THROW(b->action_of(ResidueMatrix::identity(120)), Error);
}

TEST(Weber, CocycleRandomPairs) {
  auto b = FunctionBasis::g72();
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    auto s = random_gl2(rng, 72), t = random_gl2(rng, 72);
    EXPECT_EQ(b->action_of(s * t), b->action_of(t) * b->action_of(s).galois(t.det())) << s << " " << t;
  }
}

TEST(Weber, HomomorphismOnDetOne) {
  std::mt19937_64 rng(77);
  for (auto b : {FunctionBasis::g72(), FunctionBasis::nu(5)}) {
    const i64 M = b->level();
    for (int i = 0; i < 200; ++i) {
      auto s = random_gl2(rng, M), t = random_gl2(rng, M);
      s = split_det(s).sl2;
      t = split_det(t).sl2;
      EXPECT_EQ(b->action_of(s * t), b->action_of(t) * b->action_of(s));
    }
  }
}

TEST(Weber, WordIndependence) {
  auto b = FunctionBasis::nu(7);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    auto m = split_det(random_gl2(rng, 168)).sl2;
    auto w = decompose_st(m);
    // (ST)^3 S^2 is the identity of SL(2,Z)
    auto w2 = parse_word(w.to_string() + " S T S T S T S^2");
    auto w3 = parse_word("T^168 " + w.to_string() + " S^4");
    EXPECT_EQ(b->action_of_word(w), b->action_of_word(w2));
    EXPECT_EQ(b->action_of_word(w), b->action_of_word(w3));
    EXPECT_EQ(b->action_of_word(w), b->action_of(m));
  }
}
