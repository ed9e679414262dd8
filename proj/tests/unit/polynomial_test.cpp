#include <gtest/gtest.h>

#include <unordered_set>

#include "zkit/polynomial.hpp"

namespace zkit {
namespace {

Polynomial poly(const PrimeField& f, std::initializer_list<std::int64_t> c) {
  std::vector<FieldElement> v;
  for (auto x : c) v.push_back(f.element(x));
  return Polynomial(f, std::move(v));
}

Polynomial random_poly(const PrimeField& f, Rng& rng, std::size_t size) {
  std::vector<FieldElement> v;
  for (std::size_t i = 0; i < size; ++i) v.push_back(f.random(rng));
  return Polynomial(f, std::move(v));
}

using Points = std::vector<std::pair<FieldElement, FieldElement>>;

TEST(Polynomial, CanonicalForm) {
  const auto& f = PrimeField::preset("p101");
  auto p = poly(f, {1, 2, 0, 0});
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.degree(), 1u);
  EXPECT_FALSE(Polynomial(f).degree().has_value());
  EXPECT_EQ(poly(f, {0, 0}), Polynomial(f));
  EXPECT_EQ(poly(f, {3, 101}), poly(f, {3}));
}

TEST(Polynomial, EvalTwoMinusX) {
  const auto& f = PrimeField::preset("p101");
  auto p = poly(f, {2, -1});
  EXPECT_EQ(poly_eval(p, f.element(1)), f.one());
  EXPECT_EQ(poly_eval(p, f.element(2)), f.zero());
  EXPECT_EQ(poly_eval(Polynomial(f), f.element(42)), f.zero());
}

TEST(Polynomial, InterpolateWorkedExample) {
  const auto& f = PrimeField::preset("p101");
  Points l1 = {{f.element(1), f.element(1)}, {f.element(2), f.element(0)}};
  Points l2 = {{f.element(1), f.element(0)}, {f.element(2), f.element(1)}};
  EXPECT_EQ(poly_interpolate(l1), poly(f, {2, -1}));
  EXPECT_EQ(poly_interpolate(l2), poly(f, {-1, 1}));
  Points single = {{f.element(9), f.element(33)}};
  EXPECT_EQ(poly_interpolate(single), poly(f, {33}));
}

TEST(Polynomial, InterpolateDuplicateAbscissa) {
  const auto& f = PrimeField::preset("p101");
  Points pts = {{f.element(3), f.element(1)}, {f.element(104), f.element(2)}};
  try {
    poly_interpolate(pts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDuplicateAbscissa);
  }
}

TEST(Polynomial, DivremExamples) {
  const auto& f = PrimeField::preset("p101");
  auto [q, r] = poly_divrem(poly(f, {8, -12, 4}), poly(f, {2, -3, 1}));
  EXPECT_EQ(q, poly(f, {4}));
  EXPECT_TRUE(r.is_zero());

  auto [q2, r2] = poly_divrem(poly(f, {0, 0, 1}), poly(f, {0, 1}));
  EXPECT_EQ(q2, poly(f, {0, 1}));
  EXPECT_TRUE(r2.is_zero());

  auto [q3, r3] = poly_divrem(poly(f, {1, 1}), poly(f, {0, 0, 1}));
  EXPECT_TRUE(q3.is_zero());
  EXPECT_EQ(r3, poly(f, {1, 1}));

  EXPECT_THROW(poly_divrem(poly(f, {1}), Polynomial(f)), Error);
}

TEST(Polynomial, VanishingExamples) {
  const auto& f101 = PrimeField::preset("p101");
  EXPECT_EQ(vanishing_poly(f101, 2), poly(f101, {2, -3, 1}));
  EXPECT_EQ(vanishing_poly(f101, 1), poly(f101, {-1, 1}));
  // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6, reduced mod 7: m=3 needs 2m < p.
  const auto& f7 = PrimeField::get(std::uint64_t{7});
  EXPECT_EQ(vanishing_poly(f7, 3), poly(f7, {-6 + 7, 11 - 7, -6 + 7, 1}));
  try {
    vanishing_poly(f7, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kFieldTooSmall);
  }
  EXPECT_THROW(vanishing_poly(f7, 0), Error);
}

TEST(Polynomial, VanishingRootsProperty) {
  const auto& f = PrimeField::preset("p10007");
  for (std::size_t m : {1, 5, 40, 200}) {
    auto t = vanishing_poly(f, m);
    EXPECT_EQ(t.degree(), m);
    EXPECT_EQ(t.coeffs().back(), f.one());
    for (std::size_t q = 1; q <= m; ++q) {
      ASSERT_TRUE(poly_eval(t, f.element(static_cast<std::int64_t>(q))).is_zero());
    }
    EXPECT_FALSE(poly_eval(t, f.element(static_cast<std::int64_t>(m + 1))).is_zero());
  }
}

TEST(Polynomial, InterpolationRoundTrip) {
  Rng rng(5);
  for (const auto& name : PrimeField::preset_names()) {
    const auto& f = PrimeField::preset(name);
    for (std::size_t k : {1, 2, 7, 30}) {
      auto g = random_poly(f, rng, k);
      Points pts;
      std::unordered_set<FieldElement> used;
      while (pts.size() < k) {
        auto x = f.random(rng);
        if (!used.insert(x).second) continue;
        pts.emplace_back(x, poly_eval(g, x));
      }
      ASSERT_EQ(poly_interpolate(pts), g) << name << " k=" << k;
    }
  }
}

TEST(Polynomial, DivremReconstruction) {
  Rng rng(9);
  const auto& f = PrimeField::preset("bn254-scalar");
  for (int trial = 0; trial < 40; ++trial) {
    auto num = random_poly(f, rng, 1 + rng.uniform(60));
    auto den = random_poly(f, rng, 1 + rng.uniform(20));
    if (den.is_zero()) continue;
    auto [q, r] = poly_divrem(num, den);
    ASSERT_EQ(q * den + r, num);
    if (!r.is_zero()) ASSERT_LT(*r.degree(), *den.degree());
  }
}

TEST(Polynomial, FastMultiplicationMatchesSchoolbook) {
  Rng rng(13);
  for (const auto& name : PrimeField::preset_names()) {
    const auto& f = PrimeField::preset(name);
    for (auto [n, m] : {std::pair{1, 1}, {33, 40}, {100, 35}, {257, 190}}) {
      auto a = random_poly(f, rng, static_cast<std::size_t>(n));
      auto b = random_poly(f, rng, static_cast<std::size_t>(m));
      ASSERT_EQ(poly_detail::mul_kronecker(a, b), poly_detail::mul_schoolbook(a, b)) << name;
      ASSERT_EQ(poly_detail::mul_kronecker(a, a), poly_detail::mul_schoolbook(a, a)) << name;
    }
  }
}

TEST(Polynomial, NewtonDivisionMatchesSchoolbook) {
  Rng rng(17);
  for (const auto& name : PrimeField::preset_names()) {
    const auto& f = PrimeField::preset(name);
    for (auto [n, m] : {std::pair{10, 3}, {300, 100}, {500, 250}, {129, 129}}) {
      auto num = random_poly(f, rng, static_cast<std::size_t>(n));
      auto den = random_poly(f, rng, static_cast<std::size_t>(m));
      auto a = poly_detail::divrem_newton(num, den);
      auto b = poly_detail::divrem_schoolbook(num, den);
      ASSERT_EQ(a.quot, b.quot) << name;
      ASSERT_EQ(a.rem, b.rem) << name;
    }
  }
}

TEST(Polynomial, InverseSeries) {
  Rng rng(19);
  const auto& f = PrimeField::preset("p10007");
  auto g = random_poly(f, rng, 50) + poly(f, {1});
  if (g.coeff(0).is_zero()) g = g + poly(f, {1});
  auto inv = poly_detail::inverse_series(g, 77);
  EXPECT_EQ((g * inv).truncated(77), poly(f, {1}));
}

TEST(LagrangeDomain, InterpolateMatchesNaive) {
  Rng rng(23);
  for (const auto& name : {"p10007", "bn254-scalar"}) {
    const auto& f = PrimeField::preset(name);
    for (std::size_t m : {1, 2, 31, 32, 33, 150}) {
      LagrangeDomain dom(f, m);
      EXPECT_EQ(dom.vanishing(), vanishing_poly(f, m));
      std::vector<FieldElement> ys;
      Points pts;
      for (std::size_t q = 1; q <= m; ++q) {
        ys.push_back(f.random(rng));
        pts.emplace_back(f.element(static_cast<std::int64_t>(q)), ys.back());
      }
      ASSERT_EQ(dom.interpolate(ys), poly_interpolate(pts)) << name << " m=" << m;
    }
  }
}

TEST(LagrangeDomain, BasisAtPoint) {
  Rng rng(29);
  const auto& f = PrimeField::preset("p10007");
  const std::size_t m = 45;
  LagrangeDomain dom(f, m);
  auto z = f.random(rng);
  auto basis = dom.basis_at(z);
  for (std::size_t q = 1; q <= m; q += 11) {
    std::vector<FieldElement> unit(m, f.zero());
    unit[q - 1] = f.one();
    EXPECT_EQ(basis[q - 1], poly_eval(dom.interpolate(unit), z));
  }
  auto at_point = dom.basis_at(f.element(7));
  for (std::size_t q = 0; q < m; ++q) EXPECT_EQ(at_point[q], q == 6 ? f.one() : f.zero());
}

}  // namespace
}  // namespace zkit
