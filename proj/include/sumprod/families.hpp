#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sumprod/error.hpp"
#include "sumprod/field.hpp"
#include "sumprod/polynomial.hpp"

namespace sumprod {

enum class Verdict { Unchecked, Verified, FailsSum, FailsProduct, FailsBoth };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Unchecked: return "Unchecked";
    case Verdict::Verified: return "Verified";
    case Verdict::FailsSum: return "FailsSum";
    case Verdict::FailsProduct: return "FailsProduct";
    case Verdict::FailsBoth: return "FailsBoth";
  }
  return "Unknown";
}

/// How a family's coordinates are tied together. SumAndProduct fixes both
/// the sum and the product; ProductTimesSum is the single condition
/// a*b*c*(a+b+c) = target.
enum class ConstraintForm { SumAndProduct, ProductTimesSum };

struct Family {
  std::string name;
  std::vector<std::string> variables;
  std::vector<RatFunc> coords;
  ConstraintForm form = ConstraintForm::SumAndProduct;
  RatFunc sum_target;      // unused for ProductTimesSum
  RatFunc product_target;  // for ProductTimesSum: target of prod * sum
  std::vector<MultiPoly> excluded_locus;
  std::set<std::uint64_t> bad_primes;
  Verdict verdict = Verdict::Unchecked;
  MultiPoly sum_residual;
  MultiPoly product_residual;

  std::string constraint_text() const {
    if (form == ConstraintForm::ProductTimesSum) return "product*sum=" + product_target.num().str();
    return "sum=" + sum_target.num().str() + " product=" + product_target.num().str();
  }
};

/// Builds an uncertified family from text. Targets are rational-function
/// expressions in the same variables; for ProductTimesSum pass an empty sum.
inline Family make_family(std::string name, std::vector<std::string> vars, const std::vector<std::string>& coords,
                          ConstraintForm form, std::string_view sum_target, std::string_view product_target) {
  Family f;
  f.name = std::move(name);
  f.variables = std::move(vars);
  f.form = form;
  for (const auto& c : coords) f.coords.push_back(RatFunc::parse(f.variables, c));
  f.product_target = RatFunc::parse(f.variables, product_target);
  f.sum_target = form == ConstraintForm::SumAndProduct ? RatFunc::parse(f.variables, sum_target)
                                                      : RatFunc(MultiPoly::constant(f.variables, 0));

  std::vector<RatFunc> all = f.coords;
  all.push_back(f.product_target);
  if (form == ConstraintForm::SumAndProduct) all.push_back(f.sum_target);
  for (const auto& r : all) {
    if (std::find(f.excluded_locus.begin(), f.excluded_locus.end(), r.den()) == f.excluded_locus.end()) {
      f.excluded_locus.push_back(r.den());
    }
  }
  f.bad_primes = bad_primes(all);
  return f;
}

/// Decides the family's identities by denominator clearing and stores the
/// verdict together with the residual numerators.
inline Verdict certify_family(Family& f) {
  const auto& vars = f.variables;
  if (f.form == ConstraintForm::ProductTimesSum) {
    // prod(c_i) * sum(c_i) = target, as a product identity with the sum as one more factor
    RatFunc sum(MultiPoly::constant(vars, 0));
    for (const auto& c : f.coords) sum = sum + c;
    std::vector<RatFunc> factors = f.coords;
    factors.push_back(sum);
    f.sum_residual = MultiPoly(vars);
    f.product_residual = product_identity_residual(factors, f.product_target);
    f.verdict = f.product_residual.is_zero() ? Verdict::Verified : Verdict::FailsProduct;
    return f.verdict;
  }
  f.sum_residual = sum_identity_residual(f.coords, f.sum_target);
  f.product_residual = product_identity_residual(f.coords, f.product_target);
  const bool sum_ok = f.sum_residual.is_zero();
  const bool product_ok = f.product_residual.is_zero();
  if (sum_ok && product_ok) {
    f.verdict = Verdict::Verified;
  } else if (product_ok) {
    f.verdict = Verdict::FailsSum;
  } else if (sum_ok) {
    f.verdict = Verdict::FailsProduct;
  } else {
    f.verdict = Verdict::FailsBoth;
  }
  return f.verdict;
}

/// True when some excluded-locus polynomial vanishes at the point.
inline bool is_excluded(const Family& f, const Field& field, const Assignment& point) {
  for (const auto& d : f.excluded_locus) {
    if (d.eval(field, point).is_zero()) return true;
  }
  return false;
}

/// Instantiates a certified family. The returned tuple is re-checked against
/// the family's targets at the same point before it is handed out.
inline std::vector<Elem> evaluate_family(const Family& f, const Field& field, const Assignment& point) {
  if (f.verdict != Verdict::Verified) {
    fail(ErrorCode::NotCertified, f.name + " has verdict " + std::string(to_string(f.verdict)));
  }
  if (f.bad_primes.contains(field->characteristic())) {
    fail(ErrorCode::BadCharacteristic, f.name + " is undefined in characteristic " + std::to_string(field->characteristic()));
  }
  if (is_excluded(f, field, point)) fail(ErrorCode::ExcludedPoint, f.name + " is not defined at this point");

  std::vector<Elem> out;
  out.reserve(f.coords.size());
  for (const auto& c : f.coords) out.push_back(eval_ratfunc(c, field, point));

  Elem sum = Elem::zero(field);
  Elem product = Elem::unit(field);
  for (const auto& e : out) {
    sum += e;
    product *= e;
  }
  bool ok = false;
  if (f.form == ConstraintForm::ProductTimesSum) {
    ok = product * sum == eval_ratfunc(f.product_target, field, point);
  } else {
    ok = sum == eval_ratfunc(f.sum_target, field, point) && product == eval_ratfunc(f.product_target, field, point);
  }
  if (!ok) throw std::logic_error(f.name + ": certified family produced a tuple violating its targets");
  return out;
}

/// The immutable, certified catalog of parametrization families. Built and
/// certified on first use.
class Catalog {
 public:
  static const Catalog& instance() {
    static const Catalog catalog;
    return catalog;
  }

  const std::vector<Family>& families() const noexcept { return families_; }

  const Family& get(std::string_view name) const {
    for (const auto& f : families_) {
      if (f.name == name) return f;
    }
    fail(ErrorCode::NotInTable, "no family named " + std::string(name));
  }

  /// Families the decomposer is allowed to route through.
  const Family& routable(std::string_view name) const {
    const Family& f = get(name);
    if (f.verdict != Verdict::Verified) fail(ErrorCode::NotCertified, f.name + " is quarantined");
    return f;
  }

  /// Builds the uncertified catalog; useful for tests of the gate itself.
  static std::vector<Family> uncertified() {
    using CF = ConstraintForm;
    std::vector<Family> out;
    out.push_back(make_family(
        "EULER", {"s", "t", "q"},
        {"6*q*s*t^3*(q*t^4-2*s^4)^2/((4*q*t^4+s^4)*(2*q^2*t^8+10*q*s^4*t^4-s^8))",
         "3*s^5*(4*q*t^4+s^4)^2/(2*t*(q*t^4-2*s^4)*(2*q^2*t^8+10*q*s^4*t^4-s^8))",
         "2*(2*q^2*t^8+10*q*s^4*t^4-s^8)/(3*s^3*t*(4*q*t^4+s^4))"},
        CF::ProductTimesSum, "", "q"));
    out.push_back(make_family("ELKIES", {"x", "s"},
                              {"(s^4+4*x)^2/(2*s^3*(s^4-12*x))", "2*x*(3*s^4-4*x)^2/(s^3*(s^4+4*x)*(s^4-12*x))",
                               "s*(s^4-12*x)/(2*(3*s^4-4*x))", "-2*s^5*(s^4-12*x)/((s^4+4*x)*(3*s^4-4*x))"},
                              CF::SumAndProduct, "0", "x"));
    out.push_back(make_family("KMP", {"x"},
                              {"2*(1-4*x)^2/(3*(1+8*x))", "-(1+8*x)/6", "-(1+8*x)/(2*(1-4*x))",
                               "18*x/((1-4*x)*(1+8*x))"},
                              CF::SumAndProduct, "0", "x"));
    out.push_back(make_family("THM11_K4", {"x"}, {"-(1-x)^2/(2*(1+x))", "(1+x)/2", "(1+x)/(1-x)", "4*x/(x^2-1)"},
                              CF::SumAndProduct, "1", "x"));
    out.push_back(make_family("THM12I", {"x"}, {"(x+1)^2/(2*(x+3))", "(x+3)/2", "-(x+3)/(x+1)", "4/((x+1)*(x+3))"},
                              CF::SumAndProduct, "x", "-1"));
    out.push_back(make_family("THM12II", {"x"},
                              {"-2*(x+9)^2/(15*(2*x+3))", "8*(2*x+3)/15", "-(2*x+3)/(4*(x+9))",
                               "25/(4*(x+9)*(2*x+3))"},
                              CF::SumAndProduct, "x", "1"));
    out.push_back(make_family("THM13_K2", {"x"}, {"(x+1)^2/(2*(x-1))", "(x-1)/2", "(1-x)/(1+x)", "4*x/(1-x^2)"},
                              CF::SumAndProduct, "x", "x"));
    return out;
  }

 private:
  Catalog() : families_(uncertified()) {
    for (auto& f : families_) certify_family(f);
  }

  std::vector<Family> families_;
};

// ---- exceptional witnesses ------------------------------------------------

enum class WitnessTable { Sum1ProductX, SumXProductMinus1, SumXProduct1, SumXProductX, F3Product1, ConjectureDemo };

inline std::string_view to_string(WitnessTable t) {
  switch (t) {
    case WitnessTable::Sum1ProductX: return "sum1-product-x";
    case WitnessTable::SumXProductMinus1: return "sum-x-product-minus1";
    case WitnessTable::SumXProduct1: return "sum-x-product-1";
    case WitnessTable::SumXProductX: return "sum-x-product-x";
    case WitnessTable::F3Product1: return "f3-product-1";
    case WitnessTable::ConjectureDemo: return "conjecture-demo";
  }
  return "unknown";
}

/// Which characteristics a table entry applies to.
enum class CharClass { Any, CharNot3, Char3, CharNot3Not5, F3Only };

inline bool char_class_matches(CharClass cls, const FieldDesc& f) {
  switch (cls) {
    case CharClass::Any: return true;
    case CharClass::CharNot3: return f.characteristic() != 3;
    case CharClass::Char3: return f.characteristic() == 3;
    case CharClass::CharNot3Not5: return f.characteristic() != 3 && f.characteristic() != 5;
    case CharClass::F3Only: return f.order() == 3;
  }
  return false;
}

struct TableWitness {
  WitnessTable table;
  Rational x;
  CharClass char_class;
  std::vector<Rational> elements;
};

/// The sum and product a table's witnesses claim, as functions of x.
inline Elem table_sum_target(WitnessTable t, const Elem& x) {
  const Field& f = x.field();
  switch (t) {
    case WitnessTable::Sum1ProductX: return Elem::unit(f);
    case WitnessTable::ConjectureDemo: return x + Elem::unit(f);
    default: return x;
  }
}

inline Elem table_product_target(WitnessTable t, const Elem& x) {
  const Field& f = x.field();
  switch (t) {
    case WitnessTable::SumXProductMinus1: return -Elem::unit(f);
    case WitnessTable::SumXProduct1:
    case WitnessTable::F3Product1: return Elem::unit(f);
    default: return x;
  }
}

inline const std::vector<TableWitness>& witness_table() {
  using W = WitnessTable;
  using C = CharClass;
  auto r = [](long long n, long long d = 1) { return Rational(BigInt(n), BigInt(d)); };
  static const std::vector<TableWitness> table{
      {W::Sum1ProductX, r(-1), C::Any, {r(1, 2), r(1, 2), r(2), r(-2)}},
      {W::Sum1ProductX, r(1), C::CharNot3, {r(3, 2), r(-3, 2), r(-1, 3), r(4, 3)}},
      {W::Sum1ProductX, r(1), C::Char3, {r(1), r(1), r(1), r(1)}},
      {W::SumXProductMinus1, r(-1), C::Any, {r(2), r(-2), r(-1, 2), r(-1, 2)}},
      {W::SumXProductMinus1, r(-3), C::CharNot3, {r(2, 3), r(-2, 3), r(-3, 2), r(-3, 2)}},
      {W::SumXProduct1, r(0), C::CharNot3, {r(1), r(1), r(-1), r(-1)}},
      {W::SumXProduct1, r(-3, 2), C::CharNot3Not5, {r(1), r(-1), r(-2), r(1, 2)}},
      {W::SumXProduct1, r(-9), C::CharNot3Not5, {r(-4), r(-9, 2), r(-1, 3), r(-1, 6)}},
      {W::SumXProductX, r(-1), C::Any, {r(-1, 2), r(-1, 2), r(2), r(-2)}},
      {W::SumXProductX, r(1), C::CharNot3, {r(3, 2), r(-3, 2), r(-1, 3), r(4, 3)}},
      {W::SumXProductX, r(1), C::Char3, {r(1), r(1), r(1), r(1)}},
      {W::F3Product1, r(0), C::F3Only, {r(1), r(1), r(-1), r(-1)}},
      {W::F3Product1, r(1), C::F3Only, {r(1), r(1), r(1), r(1)}},
      {W::F3Product1, r(-1), C::F3Only, {r(-1), r(-1), r(-1), r(-1)}},
      {W::ConjectureDemo, r(1), C::CharNot3, {r(-2), r(9, 2), r(-2, 3), r(1, 6)}},
  };
  return table;
}

/// Embeds an entry into a field, or nullopt if one of its constants has a
/// vanishing denominator there.
inline std::optional<std::vector<Elem>> embed_witness(const TableWitness& w, const Field& field) {
  std::vector<Elem> out;
  try {
    for (const auto& c : w.elements) out.push_back(rational_embed(field, c));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DivisionByZero) return std::nullopt;
    throw;
  }
  return out;
}

inline bool witness_applies(const TableWitness& w, const Field& field) {
  if (!char_class_matches(w.char_class, *field)) return false;
  if (field->is_finite() && int_embed(field, w.x.den()).is_zero()) return false;
  return embed_witness(w, field).has_value();
}

/// The hardcoded tuple for an exceptional x of a table, embedded into the
/// field of x.
inline std::vector<Elem> witness_table_lookup(WitnessTable table, const Elem& x) {
  const Field& field = x.field();
  for (const auto& w : witness_table()) {
    if (w.table != table || !witness_applies(w, field)) continue;
    if (rational_embed(field, w.x) == x) return *embed_witness(w, field);
  }
  fail(ErrorCode::NotInTable, std::string(to_string(table)) + " has no entry for x=" + x.str() + " in " + field->spec());
}

}  // namespace sumprod
