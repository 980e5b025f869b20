#include <gtest/gtest.h>

#include <random>

#include "classinv/qseries.hpp"

using namespace classinv;

namespace {

QExpansion random_series(std::mt19937_64& rng, i64 M, i64 lead, i64 order) {
  QExpansion f(24, M, order);
  std::uniform_int_distribution<int> u(-4, 4);
  f.add_term(lead, CycloNum::root(M, static_cast<i64>(rng() % M)));
  for (i64 e = lead + 1; e < order; ++e)
    if (rng() % 4 == 0) f.add_term(e, CycloNum(M, static_cast<long>(u(rng))).mul_root(static_cast<i64>(rng() % M)));
  return f;
}

// independent pentagonal-number oracle for prod (1 - q^n)
std::map<i64, int> pentagonal(i64 limit) {
  std::map<i64, int> out;
  for (i64 k = -40; k <= 40; ++k) {
    i64 e = k * (3 * k - 1) / 2;
    if (e < limit) out[e] = (k % 2 == 0) ? 1 : -1;
  }
  return out;
}

}  // namespace

TEST(QSeries, EtaLeadingTerm) {
  auto e = eta_series(30);
  EXPECT_EQ(e.leading_exponent(), 1);
  EXPECT_EQ(e.denom(), 24);
  EXPECT_EQ(e.leading_coeff(), CycloNum::one(24));
}

TEST(QSeries, EtaMatchesPentagonalNumbers) {
  auto e = eta_series(60);
  auto oracle = pentagonal(60);
  for (i64 n = 0; n < 60; ++n) {
    int expect = oracle.count(n) ? oracle[n] : 0;
    EXPECT_EQ(e.coeff(1 + 24 * n), CycloNum(24, static_cast<long>(expect))) << n;
  }
  EXPECT_TRUE(e.coeff(1 + 24 * 3).is_zero());
}

TEST(QSeries, ProductMatchesNaiveOracle) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 10; ++it) {
    auto f = random_series(rng, 24, -3, 40), g = random_series(rng, 24, 2, 40);
    auto h = f * g;
    std::map<i64, CycloNum> naive;
    for (const auto& [e1, c1] : f.terms())
      for (const auto& [e2, c2] : g.terms()) {
        auto [p, fresh] = naive.emplace(e1 + e2, c1 * c2);
        if (!fresh) p->second += c1 * c2;
      }
    int checked = 0;
    for (i64 e = h.leading_exponent(); checked < 20; ++e, ++checked) {
      ASSERT_LT(e, h.order());
      CycloNum expect = naive.count(e) ? naive.at(e) : CycloNum(24);
      EXPECT_EQ(h.coeff(e), expect) << e;
    }
  }
}

TEST(QSeries, InverseIsInverse) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 5; ++it) {
    auto f = random_series(rng, 24, 2, 50);
    auto p = f * f.inverse();
    QExpansion one(24, 24, p.order());
    one.add_term(0, CycloNum::one(24));
    EXPECT_TRUE(p.agrees_with(one));
    EXPECT_GT(p.order(), 20);
  }
}

TEST(QSeries, ActTOnEta) {
  auto e = eta_series(20, 72);
  auto t = e.act_T();
  EXPECT_TRUE(t.agrees_with(e.scaled(CycloNum::root(72, 3))));  // zeta_24
  QExpansion c(24, 24, 10);
  c.add_term(0, CycloNum(24, 5L));
  EXPECT_TRUE(c.act_T().agrees_with(c));
  QExpansion f = eta_series(10, 24);
  QExpansion g = f;
  for (int k = 0; k < 24; ++k) g = g.act_T();
  EXPECT_TRUE(g.agrees_with(f));
}

TEST(QSeries, NuLeadingTerms) {
  for (i64 N : {3, 5, 7}) {
    auto a = nu_expansion(kNuN0, N, 200);
    EXPECT_EQ(a.denom(), 24 * N);
    EXPECT_EQ(a.leading_exponent(), N * N - N);  // (N-1)/24
    EXPECT_EQ(a.leading_coeff(), sqrt_gauss(N, 24 * N));
    auto b = nu_expansion(0, N, 200);
    EXPECT_EQ(b.leading_exponent(), 1 - N);  // (1/N - 1)/24
    EXPECT_EQ(b.leading_coeff(), CycloNum::one(24 * N));
    for (const auto& [e, c] : b.terms()) EXPECT_TRUE(c.is_rational()) << e;
  }
  EXPECT_THROW(nu_expansion(7, 5, 100), Error);
  EXPECT_THROW(nu_expansion(0, 9, 100), Error);
}

TEST(QSeries, GaloisCoeffs) {
  auto e = eta_series(10, 72);
  EXPECT_TRUE(e.galois_coeffs(5).agrees_with(e));
  auto a = nu_expansion(kNuN0, 5, 120);
  EXPECT_TRUE(a.galois_coeffs(1).agrees_with(a));
  // sigma_d(sqrt 5) = (d|5) sqrt 5
  for (i64 d : {7, 11, 13, 17}) {
    auto g = a.galois_coeffs(d);
    EXPECT_EQ(g.leading_coeff(), a.leading_coeff().scaled(legendre(d, 5)));
  }
  EXPECT_THROW(a.galois_coeffs(5), Error);
}

TEST(QSeries, RecognizeLinear) {
  const i64 N = 3, M = 72;
  std::vector<QExpansion> basis{nu_expansion(kNuN0, N, 400)};
  for (i64 k = 0; k < N; ++k) basis.push_back(nu_expansion(k, N, 400));
  auto c = recognize_linear(basis[2], basis);
  for (std::size_t i = 0; i < basis.size(); ++i) EXPECT_EQ(c[i], i == 2 ? CycloNum::one(M) : CycloNum(M));
  auto z = CycloNum::root(M, 7);
  c = recognize_linear(basis[3].scaled(z) + basis[0], basis);
  EXPECT_EQ(c[3], z);
  EXPECT_EQ(c[0], CycloNum::one(M));
  // nu_{0,N} o T = zeta_24^{-1} nu_{1,N}
  c = recognize_linear(basis[1].act_T(), basis);
  EXPECT_EQ(c[2], CycloNum::root(M, -N));
  EXPECT_TRUE(c[0].is_zero() && c[1].is_zero() && c[3].is_zero());
  // outside the span
  auto eta_like = eta_substituted(1, 0, 1, 24 * N, M, 20).truncated(400);
  EXPECT_EQ(try_recognize_linear(eta_like, basis).status, RecognitionStatus::NoSolution);
  // too short
  std::vector<QExpansion> shortb;
  for (const auto& b : basis) shortb.push_back(b.truncated(b.leading_exponent() + 2));
  EXPECT_EQ(try_recognize_linear(shortb[0], shortb).status, RecognitionStatus::Ambiguous);
}

// For N = 5 the six nu functions span a 3-dimensional space, so no truncation pins a unique vector.
TEST(QSeries, NuFamilyDependentForNFive) {
  const i64 N = 5;
  std::vector<QExpansion> basis{nu_expansion(kNuN0, N, 1200)};
  for (i64 k = 0; k < N; ++k) basis.push_back(nu_expansion(k, N, 1200));
  EXPECT_EQ(try_recognize_linear(basis[2], basis).status, RecognitionStatus::Ambiguous);
}

TEST(QSeries, DumpFormat) {
  auto e = eta_series(3);
  EXPECT_EQ(e.dump(), "q^(1/24): 1\nq^(25/24): -1\nq^(49/24): -1\n");
}
