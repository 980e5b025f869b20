#include <gtest/gtest.h>

#include <random>
#include <set>

#include "classinv/descent.hpp"
#include "fixtures.hpp"

using namespace classinv;

namespace {

struct Case {
  OrderContext ctx;
  ReciprocityGroup G;
  std::shared_ptr<FunctionBasis> fb;
};

Case make(i64 D, const std::string& family) {
  auto fb = FunctionBasis::by_name(family);
  auto ctx = OrderContext::make(D, fb->level());
  return {ctx, build_group(ctx), fb};
}

const Case& s571() {
  static const Case s = make(-571, "g72");
  return s;
}
const Case& s91_5() {
  static const Case s = make(-91, "nu5");
  return s;
}
const Case& s91_7() {
  static const Case s = make(-91, "nu7");
  return s;
}

CycloVec coords_of(const Case& s, const std::string& text) {
  auto p = InvariantPolynomial::parse(*s.fb, text);
  return p.coords(MonomialBasis(s.fb->size(), p.degree()));
}

}  // namespace

TEST(Descent, OrderContextDefaults) {
  auto o = OrderContext::make(-571, 72);
  EXPECT_EQ(o.B, 1);
  EXPECT_EQ(o.C, 143);
  auto e = OrderContext::make(-20, 72);
  EXPECT_EQ(e.B, 0);
  EXPECT_EQ(e.C, 5);
  EXPECT_THROW(OrderContext::make(-3, 72), Error);
  EXPECT_THROW(OrderContext::make(-4, 72), Error);
  EXPECT_THROW(OrderContext::make(-90, 72), Error);
  EXPECT_THROW(OrderContext::make(-91, 72, 1, 5), Error);
}

TEST(Descent, GroupOrders571) {
  const auto& s = s571();
  EXPECT_EQ(s.G.elements.size(), 3456u);
  EXPECT_EQ(s.G.H.size(), 144u);
  EXPECT_EQ(s.G.elements.size(), s.G.H.size() * s.G.coset_reps.size());
  EXPECT_TRUE(s.G.det_surjective());
  EXPECT_EQ(s.G.elements.front(), s.ctx.element(0, 1));  // (t, s) = (0, 1) is theta itself
  EXPECT_TRUE(std::find(s.G.H.begin(), s.G.H.end(), ResidueMatrix::identity(72)) != s.G.H.end());
}

TEST(Descent, GroupDeterminantIsNorm) {
  const auto& s = s571();
  for (i64 t = 0; t < 72; t += 5)
    for (i64 u = 0; u < 72; u += 7) EXPECT_EQ(s.ctx.element(t, u).det(), s.ctx.norm(t, u));
}

TEST(Descent, GroupClosure) {
  for (const Case* s : {&s571(), &s91_5()}) {
    std::set<ResidueMatrix> all(s->G.elements.begin(), s->G.elements.end());
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) {
      const auto& a = s->G.elements[rng() % s->G.elements.size()];
      const auto& b = s->G.elements[rng() % s->G.elements.size()];
      EXPECT_TRUE(all.count(a * b));
      EXPECT_TRUE(all.count(a.inverse()));
      EXPECT_EQ(a * b, b * a);
    }
  }
}

TEST(Descent, GroupOrdersByBruteForce91) {
  // independent count of units t + s*theta in O/MO
  for (const Case* s : {&s91_5(), &s91_7()}) {
    const i64 M = s->ctx.M;
    std::size_t count = 0;
    std::set<i64> dets;
    for (i64 t = 0; t < M; ++t)
      for (i64 u = 0; u < M; ++u) {
        const i64 n = ((t * t - t * u + 23 * u * u) % M + M) % M;  // norm for x^2 + x + 23
        if (std::gcd(n, M) == 1) ++count, dets.insert(n);
      }
    EXPECT_EQ(s->G.elements.size(), count);
    EXPECT_EQ(s->G.coset_reps.size(), dets.size());
  }
  EXPECT_TRUE(s91_5().G.det_surjective());
  // 7 ramifies in Q(sqrt -91): the determinant misses half of (Z/168)^*
  EXPECT_EQ(s91_7().G.coset_reps.size() * 2, static_cast<std::size_t>(euler_phi(168)));
}

TEST(Descent, GeneratorsGenerate) {
  const auto& s = s571();
  EXPECT_FALSE(s.G.generators.empty());
  EXPECT_LE(s.G.generators.size(), 8u);
  std::set<ResidueMatrix> span{ResidueMatrix::identity(72)};
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<ResidueMatrix> cur(span.begin(), span.end());
    for (const auto& x : cur)
      for (const auto& g : s.G.generators)
        if (span.insert(x * g).second) grew = true;
  }
  EXPECT_EQ(span.size(), s.G.elements.size());
}

TEST(Descent, RhoRestrictedToHIsHomomorphism) {
  for (const Case* s : {&s571(), &s91_5(), &s91_7()}) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
      const auto& a = s->G.H[rng() % s->G.H.size()];
      const auto& b = s->G.H[rng() % s->G.H.size()];
      EXPECT_EQ(s->fb->action_of(a * b), s->fb->action_of(b) * s->fb->action_of(a));
    }
  }
}

TEST(Descent, MonomialBasis) {
  MonomialBasis mb(4, 2);
  EXPECT_EQ(mb.size(), 10u);
  EXPECT_EQ(mb.monomial(0), (std::vector<int>{0, 0}));
  EXPECT_EQ(mb.monomial(9), (std::vector<int>{3, 3}));
  EXPECT_EQ(mb.index_of({2, 0}), mb.index_of({0, 2}));
  EXPECT_EQ(MonomialBasis(8, 2).size(), 36u);
  EXPECT_EQ(MonomialBasis(4, 24).size(), 2925u);
}

TEST(Descent, SymPowerMatchesExpansion) {
  const auto& s = s571();
  MonomialBasis mb(4, 3);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    ActionMatrix rho = s.fb->action_of(s.G.elements[rng() % s.G.elements.size()]);
    EXPECT_EQ(sym_power(rho, mb, true), sym_power(rho, mb));
  }
  // functoriality on dense matrices
  auto rnd = [&] {
    std::vector<CycloNum> e;
    for (int k = 0; k < 9; ++k) e.push_back(CycloNum::root(12, static_cast<i64>(rng() % 12)).scaled(static_cast<long>(rng() % 3)));
    return ActionMatrix::dense(3, 12, e);
  };
  MonomialBasis m2(3, 2);
  for (int i = 0; i < 5; ++i) {
    auto A = rnd(), B = rnd();
    EXPECT_EQ(sym_power(A * B, m2), sym_power(A, m2) * sym_power(B, m2));
  }
}

TEST(Descent, PolynomialTextRoundTrip) {
  auto fb = FunctionBasis::g72();
  for (const char* t : {fixtures::kI1_571, fixtures::kE1_571, fixtures::kI3_299}) {
    auto p = InvariantPolynomial::parse(*fb, t);
    EXPECT_EQ(InvariantPolynomial::parse(*fb, p.to_string()), p) << p.to_string();
  }
  auto p = InvariantPolynomial::parse(*fb, "g0^2 - 3/2*g1*g0");
  EXPECT_EQ(p.to_string(), "(1)*g0^2 + (-3/2)*g0*g1");
  EXPECT_THROW(InvariantPolynomial::parse(*fb, "g0*g1 + g2"), Error);
  EXPECT_THROW(InvariantPolynomial::parse(*fb, "g0*g7"), Error);
  EXPECT_THROW(InvariantPolynomial::parse(*fb, "(z*g0"), Error);
  EXPECT_EQ(p.to_json()["degree"], 2);
}

TEST(Descent, InvariantSpaces571) {
  const auto& s = s571();
  EXPECT_EQ(h_invariants(s.G, *s.fb, 1).dim(), 0u);
  auto V2 = h_invariants(s.G, *s.fb, 2);
  EXPECT_EQ(V2.dim(), 2u);
  EXPECT_TRUE(V2.contains(coords_of(s, fixtures::kI1_571)));
  EXPECT_TRUE(V2.contains(coords_of(s, fixtures::kI2_571)));
  EXPECT_FALSE(V2.contains(coords_of(s, "g0*g2")));
  EXPECT_EQ(min_degree(s.G, *s.fb, 4), 2);
}

TEST(Descent, InvariantSpaces91) {
  const auto& s5 = s91_5();
  auto V1 = h_invariants(s5.G, *s5.fb, 1);
  EXPECT_EQ(V1.dim(), 2u);
  EXPECT_TRUE(V1.contains(coords_of(s5, fixtures::kH1_91_5)));
  EXPECT_TRUE(V1.contains(coords_of(s5, fixtures::kH2_91_5)));
  EXPECT_EQ(min_degree(s5.G, *s5.fb, 3), 1);

  const auto& s7 = s91_7();
  EXPECT_EQ(min_degree(s7.G, *s7.fb, 3), 2);
  auto V2 = h_invariants(s7.G, *s7.fb, 2);
  EXPECT_EQ(V2.dim(), 6u);
  for (const auto& t : fixtures::kI_91_7) EXPECT_TRUE(V2.contains(coords_of(s7, t))) << t;
}

TEST(Descent, ReynoldsEqualsNullspace) {
  for (const Case* s : {&s571(), &s91_5(), &s91_7()})
    for (int n : {1, 2}) {
      auto a = h_invariants(s->G, *s->fb, n, InvariantMethod::Reynolds);
      auto b = h_invariants(s->G, *s->fb, n, InvariantMethod::Nullspace);
      EXPECT_EQ(a.vectors, b.vectors) << s->fb->name() << " n=" << n;
    }
}

TEST(Descent, TrivialCocycleSplits) {
  CocycleOnVn c;
  c.M = 24;
  c.dim = 2;
  for (i64 d : {1, 5, 7, 11, 13, 17, 19, 23}) c.R.emplace(d, Matrix<CycloNum>::identity(2, CycloNum(24)));
  EXPECT_TRUE(cocycle_holds(c));
  auto sp = hilbert90_split(c, 1);
  EXPECT_TRUE(sp.left_form);
  EXPECT_TRUE(sp.right_form);
  for (const auto& x : sp.BQ.data()) EXPECT_TRUE(x.is_rational());
}

TEST(Descent, Descent571) {
  const auto& s = s571();
  auto r = class_invariant_basis(s.G, s.fb, 2, 1);
  EXPECT_EQ(r.vectors.size(), 2u);
  EXPECT_EQ(r.fixed_field_degree, 1u);
  EXPECT_TRUE(r.split.left_form);
  EXPECT_TRUE(cocycle_holds(r.cocycle));
  // exact splitting identity for all 24 classes
  for (const auto& [d, R] : r.cocycle.R) EXPECT_EQ(R * galois(r.split.BQ, d), r.split.BQ);
  for (const char* e : {fixtures::kE1_571, fixtures::kE2_571}) {
    auto p = InvariantPolynomial::parse(*s.fb, e);
    EXPECT_TRUE(rational_coordinates(r, p).has_value()) << e;
    EXPECT_TRUE(verify_class_invariant(p, *s.fb, s.G));
  }
  // a different seed spans the same space
  auto r2 = class_invariant_basis(s.G, s.fb, 2, 99);
  EXPECT_EQ(r2.vectors, r.vectors);
}

TEST(Descent, Descent91Level120) {
  const auto& s = s91_5();
  auto r = class_invariant_basis(s.G, s.fb, 1, 1);
  EXPECT_EQ(r.vectors.size(), 2u);
  for (const char* e : {fixtures::kI1_91_5, fixtures::kI2_91_5})
    EXPECT_TRUE(rational_coordinates(r, InvariantPolynomial::parse(*s.fb, e)).has_value()) << e;
}

TEST(Descent, Descent91Level168) {
  const auto& s = s91_7();
  auto r = class_invariant_basis(s.G, s.fb, 2, 1);
  EXPECT_EQ(r.fixed_field_degree, 2u);
  EXPECT_EQ(r.vectors.size(), 12u);  // a 6-dimensional space over the quadratic fixed field
  EXPECT_TRUE(rational_coordinates(r, InvariantPolynomial::parse(*s.fb, fixtures::kF1_91_7)).has_value());
}

TEST(Descent, VerifyClassInvariant) {
  const auto& s = s571();
  EXPECT_FALSE(verify_class_invariant(InvariantPolynomial::parse(*s.fb, "g0"), *s.fb, s.G));
  EXPECT_FALSE(verify_class_invariant(InvariantPolynomial::parse(*s.fb, fixtures::kI1_571), *s.fb, s.G));
  // D = 5 mod 24
  auto fb = FunctionBasis::g72();
  auto G19 = build_group(OrderContext::make(-19, 72));
  auto w = InvariantPolynomial::parse(*fb, "g0^12*g1^12 + g2^12*g3^12");
  EXPECT_TRUE(verify_class_invariant(w, *fb, G19, true));
}

TEST(Descent, PrimitiveIntegral) {
  CycloVec v{CycloNum::parse(12, "3/4*z - 3/2"), CycloNum::parse(12, "9/2")};
  auto p = primitive_integral(v);
  // sign fixed by the first nonzero coordinate (constant term of the first entry)
  EXPECT_EQ(p[0], CycloNum::parse(12, "-z + 2"));
  EXPECT_EQ(p[1], CycloNum(12, -6L));
}
