#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <vector>

#include "sumprod/families.hpp"
#include "sumprod/polynomial.hpp"

using namespace sumprod;

namespace {

const std::vector<std::string> kX{"x"};

RatFunc rf(const std::string& text) { return RatFunc::parse(kX, text); }

Rational rand_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> num(-60, 60);
  std::uniform_int_distribution<long long> den(1, 40);
  return Rational(BigInt(num(rng)), BigInt(den(rng)));
}

MultiPoly random_poly(const std::vector<std::string>& vars, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(0, 5);
  std::uniform_int_distribution<int> expo(0, 3);
  std::uniform_int_distribution<long long> coef(-20, 20);
  MultiPoly p(vars);
  const int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    MultiPoly t = MultiPoly::constant(vars, coef(rng));
    for (const auto& v : vars) t = t * MultiPoly::variable(vars, v).pow(static_cast<unsigned>(expo(rng)));
    p = p + t;
  }
  return p;
}

}  // namespace

TEST(MultiPoly, RingExamples) {
  const auto x = MultiPoly::variable(kX, "x");
  const auto one = MultiPoly::constant(kX, 1);
  EXPECT_EQ(((x + one) * (x - one)).str(), "x^2-1");
  const auto three = MultiPoly::constant(kX, 3);
  const auto prod = (x + three).pow(2) * (x + one);
  EXPECT_EQ(prod.str(), "x^3+7*x^2+15*x+9");
  EXPECT_EQ(prod, MultiPoly::parse(kX, "x^3+7*x^2+15*x+9"));
  const auto p = MultiPoly::parse(kX, "-2*(x+9)^2");
  EXPECT_TRUE((p + (-p)).is_zero());
  EXPECT_EQ(p.str(), "-2*x^2-36*x-162");
}

TEST(MultiPoly, GrlexOrderAndPrinting) {
  const std::vector<std::string> vars{"x", "s"};
  const auto p = MultiPoly::parse(vars, "s^3 + x*s + x^2 + 5 + x^3");
  // degree 3 terms first, x before s within a degree
  EXPECT_EQ(p.str(), "x^3+s^3+x^2+x*s+5");
  EXPECT_EQ(p.total_degree(), 3u);
  EXPECT_EQ(MultiPoly::parse(vars, "6*x^2*s - 4*s").content(), 2);
  EXPECT_EQ(canonical_variables({"q", "x", "t", "s"}), (std::vector<std::string>{"x", "s", "t", "q"}));
}

TEST(MultiPoly, ParseErrors) {
  EXPECT_THROW(MultiPoly::parse(kX, "x/2"), Error);
  EXPECT_THROW(MultiPoly::parse(kX, "(x+1"), Error);
  EXPECT_THROW(MultiPoly::parse(kX, "x^"), Error);
  try {
    MultiPoly::parse(kX, "y+1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::VariableMismatch);
  }
}

TEST(MultiPoly, VariableMismatch) {
  const auto a = MultiPoly::variable({"x"}, "x");
  const auto b = MultiPoly::variable({"x", "s"}, "s");
  try {
    (void)(a + b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::VariableMismatch);
  }
  EXPECT_THROW(ratfunc_sum_identity({RatFunc(a)}, RatFunc(b)), Error);
}

TEST(RatFuncIdentity, Examples) {
  // the THM12I coordinates sum to x
  EXPECT_TRUE(ratfunc_sum_identity({rf("(x+1)^2/(2*(x+3))"), rf("(x+3)/2"), rf("-(x+3)/(x+1)"), rf("4/((x+1)*(x+3))")},
                                   rf("x")));
  EXPECT_TRUE(ratfunc_sum_identity({rf("1/x"), rf("-1/x")}, rf("0")));
  EXPECT_FALSE(ratfunc_sum_identity({rf("x/1")}, rf("1")));

  EXPECT_TRUE(ratfunc_prod_identity({rf("-(1-x)^2/(2*(1+x))"), rf("(1+x)/2"), rf("(1+x)/(1-x)"), rf("4*x/(x^2-1)")},
                                    rf("x")));
  EXPECT_TRUE(ratfunc_prod_identity({rf("2*(1-4*x)^2/(3*(1+8*x))"), rf("-(1+8*x)/6"), rf("-(1+8*x)/(2*(1-4*x))"),
                                     rf("18*x/((1-4*x)*(1+8*x))")},
                                    rf("x")));
  EXPECT_TRUE(ratfunc_prod_identity({rf("x/1"), rf("1/x")}, rf("1")));
}

TEST(RatFuncIdentity, Thm12iSumNumeratorOverItsOwnDenominator) {
  // over the denominator 2(x+1)(x+3) the numerator of a+b+c+d is 2x^3+8x^2+6x
  const auto sum = rf("(x+1)^2/(2*(x+3))") + rf("(x+3)/2") + rf("-(x+3)/(x+1)") + rf("4/((x+1)*(x+3))");
  const auto common = MultiPoly::parse(kX, "2*(x+1)*(x+3)");
  const auto expected = MultiPoly::parse(kX, "2*x^3+8*x^2+6*x");
  EXPECT_EQ(sum.num() * common, expected * sum.den());
  EXPECT_EQ(expected, MultiPoly::parse(kX, "2*x*(x+1)*(x+3)"));
}

TEST(RatFuncIdentity, HandCodedOracleAgreesAtRationalPoints) {
  // coordinates computed directly with Rational, independent of the parser
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 50) {
    const Rational x = rand_rational(rng);
    if (x == Rational(-1) || x == Rational(-3)) continue;
    const Rational a = (x + 1) * (x + 1) / (Rational(2) * (x + 3));
    const Rational b = (x + 3) / Rational(2);
    const Rational c = -(x + 3) / (x + 1);
    const Rational d = Rational(4) / ((x + 1) * (x + 3));
    ASSERT_EQ(a + b + c + d, x);
    ASSERT_EQ(a * b * c * d, Rational(-1));
    ++checked;
  }
}

TEST(BadPrimes, Examples) {
  EXPECT_EQ(bad_primes({rf("1/(2*(1+x))"), rf("1/2"), rf("1/(1-x)"), rf("1/(x^2-1)")}), (std::set<std::uint64_t>{2}));
  const auto thm12ii = bad_primes({rf("-2*(x+9)^2/(15*(2*x+3))"), rf("8*(2*x+3)/15"), rf("-(2*x+3)/(4*(x+9))"),
                                   rf("25/(4*(x+9)*(2*x+3))")});
  EXPECT_EQ(thm12ii, (std::set<std::uint64_t>{2, 3, 5}));
  EXPECT_TRUE(bad_primes({rf("x/1")}).empty());
  EXPECT_EQ(bad_primes({rf("1/(30*x+60)")}), (std::set<std::uint64_t>{2, 3, 5}));
}

TEST(EvalRatFunc, Examples) {
  auto q = make_field("Q");
  const auto a = rf("-(1-x)^2/(2*(1+x))");
  EXPECT_EQ(eval_ratfunc(a, q, {{"x", parse_elem(q, "3")}}), parse_elem(q, "-1/2"));
  const auto c = rf("(1+x)/(1-x)");
  try {
    eval_ratfunc(c, q, {{"x", parse_elem(q, "1")}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DenominatorVanishes);
  }
  EXPECT_THROW(eval_ratfunc(c, q, {}), Error);
  auto f7 = make_field("Fp:7");
  // (1+3)/(1-3) = 4/(-2) = -2 = 5 mod 7
  EXPECT_EQ(eval_ratfunc(c, f7, {{"x", Elem(f7, 3u)}}), Elem(f7, 5u));
}

TEST(Properties, EvaluationIsARingHomomorphism) {
  const std::vector<std::string> vars{"x", "s"};
  std::mt19937_64 rng(2024);
  for (const char* spec : {"Q", "Fp:7", "Fp:101", "Fq:5^2"}) {
    auto f = make_field(spec);
    for (int i = 0; i < 200; ++i) {
      const auto p = random_poly(vars, rng);
      const auto r = random_poly(vars, rng);
      Assignment pt;
      for (const auto& v : vars) {
        pt.emplace(v, f->is_finite() ? Elem(f, static_cast<std::uint32_t>(rng() % f->order()))
                                     : Elem(f, rand_rational(rng)));
      }
      ASSERT_EQ((p * r).eval(f, pt), p.eval(f, pt) * r.eval(f, pt)) << spec;
      ASSERT_EQ((p + r).eval(f, pt), p.eval(f, pt) + r.eval(f, pt)) << spec;
    }
  }
}

namespace {

// Every point of GF(p)^vars, as assignments.
void for_each_point(const Field& f, const std::vector<std::string>& vars, const std::function<void(const Assignment&)>& fn) {
  const auto q = static_cast<std::uint32_t>(f->order());
  std::vector<std::uint32_t> idx(vars.size(), 0);
  while (true) {
    Assignment pt;
    for (std::size_t i = 0; i < vars.size(); ++i) pt.emplace(vars[i], Elem(f, idx[i]));
    fn(pt);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == q) idx[i++] = 0;
    if (i == idx.size()) return;
  }
}

bool tuple_satisfies(const Family& fam, const Field& f, const Assignment& pt) {
  Elem sum = Elem::zero(f);
  Elem prod = Elem::unit(f);
  for (const auto& c : fam.coords) {
    const Elem v = eval_ratfunc(c, f, pt);
    sum += v;
    prod *= v;
  }
  if (fam.form == ConstraintForm::ProductTimesSum) return prod * sum == eval_ratfunc(fam.product_target, f, pt);
  return sum == eval_ratfunc(fam.sum_target, f, pt) && prod == eval_ratfunc(fam.product_target, f, pt);
}

}  // namespace

TEST(Properties, IdentityTransfersToEveryGoodCharacteristic) {
  for (const auto& fam : Catalog::instance().families()) {
    if (fam.verdict != Verdict::Verified) continue;
    for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
      if (fam.bad_primes.contains(p)) continue;
      auto f = FieldDesc::prime_field(p);
      int valid = 0;
      for_each_point(f, fam.variables, [&](const Assignment& pt) {
        if (is_excluded(fam, f, pt)) return;
        ++valid;
        ASSERT_TRUE(tuple_satisfies(fam, f, pt)) << fam.name << " over GF(" << p << ")";
      });
      EXPECT_GT(valid, 0) << fam.name << " GF(" << p << ")";
    }
  }
}

TEST(Properties, CheckerAgreesWithRandomRationalEvaluation) {
  auto q = make_field("Q");
  std::mt19937_64 rng(99);
  for (const auto& fam : Catalog::instance().families()) {
    int agree = 0;
    int disagree = 0;
    while (agree + disagree < 50) {
      Assignment pt;
      for (const auto& v : fam.variables) pt.emplace(v, Elem(q, rand_rational(rng)));
      if (is_excluded(fam, q, pt)) continue;
      (tuple_satisfies(fam, q, pt) ? agree : disagree)++;
    }
    if (fam.verdict == Verdict::Verified) {
      EXPECT_EQ(disagree, 0) << fam.name;
    } else {
      EXPECT_GT(disagree, 0) << fam.name;
    }
  }
}
