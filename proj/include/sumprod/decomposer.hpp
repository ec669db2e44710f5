#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sumprod/error.hpp"
#include "sumprod/families.hpp"
#include "sumprod/field.hpp"

namespace sumprod {

/// Product x with sum alpha.
struct SumFixed {
  Elem alpha;
};
/// Sum x with product m, m = +1 or -1.
struct ProductFixed {
  int m;
};
/// Sum x and product x.
struct Both {};
/// Sum x with product (-1)^(k/2) x; with the square-root-of-minus-one
/// variant the product is (-1)^(k/2 - 1) x.
struct OddSigned {
  bool use_sqrt_minus_one = false;
};
/// Arbitrary fixed sum and product; produced by negate_witness.
struct SumProduct {
  Elem sum;
  Elem product;
};

using Constraint = std::variant<SumFixed, ProductFixed, Both, OddSigned, SumProduct>;

struct Task {
  Elem x;
  int k;
  Constraint constraint;

  const Field& field() const { return x.field(); }
};

inline Elem expected_sum(const Task& t) {
  if (const auto* s = std::get_if<SumFixed>(&t.constraint)) return s->alpha;
  if (const auto* s = std::get_if<SumProduct>(&t.constraint)) return s->sum;
  return t.x;
}

inline Elem expected_product(const Task& t) {
  const Field& f = t.field();
  if (const auto* p = std::get_if<ProductFixed>(&t.constraint)) return int_embed(f, p->m);
  if (const auto* p = std::get_if<SumProduct>(&t.constraint)) return p->product;
  if (const auto* o = std::get_if<OddSigned>(&t.constraint)) {
    const int half = t.k / 2;
    const int exponent = o->use_sqrt_minus_one ? half - 1 : half;
    return exponent % 2 == 0 ? t.x : -t.x;
  }
  return t.x;
}

inline Elem sum_of(const std::vector<Elem>& xs, const Field& f) {
  Elem s = Elem::zero(f);
  for (const auto& e : xs) s += e;
  return s;
}

inline Elem product_of(const std::vector<Elem>& xs, const Field& f) {
  Elem p = Elem::unit(f);
  for (const auto& e : xs) p *= e;
  return p;
}

/// Exact recomputation against the given expectations.
inline bool verify(const std::vector<Elem>& elements, const std::optional<Elem>& sum, const std::optional<Elem>& product) {
  if (elements.empty()) fail(ErrorCode::ParseError, "verify needs at least one element");
  if (!sum && !product) fail(ErrorCode::ParseError, "verify needs an expected sum or product");
  const Field& f = elements.front().field();
  if (sum && !(sum_of(elements, f) == *sum)) return false;
  if (product && !(product_of(elements, f) == *product)) return false;
  return true;
}

/// A decomposition that has been checked against its task.
class Witness {
 public:
  Witness(Task task, std::vector<Elem> elements, std::string route)
      : task_(std::move(task)), elements_(std::move(elements)), route_(std::move(route)) {
    if (static_cast<int>(elements_.size()) != task_.k || !verify(elements_, expected_sum(task_), expected_product(task_))) {
      throw std::logic_error("witness failed verification on route " + route_);
    }
  }

  const Task& task() const noexcept { return task_; }
  const std::vector<Elem>& elements() const noexcept { return elements_; }
  const std::string& route() const noexcept { return route_; }
  std::size_t size() const noexcept { return elements_.size(); }

 private:
  Task task_;
  std::vector<Elem> elements_;
  std::string route_;
};

namespace detail {

struct Built {
  std::vector<Elem> elements;
  std::string route;
};

inline Built prefixed(std::string step, Built b) {
  b.route = std::move(step) + "+" + b.route;
  return b;
}

inline void append_pairs(std::vector<Elem>& xs, const Field& f, int pairs) {
  for (int i = 0; i < pairs; ++i) {
    xs.push_back(Elem::unit(f));
    xs.push_back(-Elem::unit(f));
  }
}

inline Elem signed_x(const Elem& x, int exponent) { return exponent % 2 == 0 ? x : -x; }

// Four elements with sum 1 and product y.
inline Built sum_one_quadruple(const Elem& y) {
  const Family& fam = Catalog::instance().routable("THM11_K4");
  try {
    return {evaluate_family(fam, y.field(), {{"x", y}}), "family:THM11_K4"};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ExcludedPoint) throw;
  }
  return {witness_table_lookup(WitnessTable::Sum1ProductX, y), "table:" + std::string(to_string(WitnessTable::Sum1ProductX))};
}

// Four elements with sum alpha and product x: solve x/alpha^4 with sum 1, scale by alpha.
inline Built product_constrained_four(const Elem& x, const Elem& alpha) {
  const Elem alpha4 = alpha * alpha * alpha * alpha;
  Built b = sum_one_quadruple(x / alpha4);
  for (auto& e : b.elements) e = e * alpha;
  return prefixed("thm11/case1/scale", std::move(b));
}

inline Built product_constrained(const Elem& x, int k, const Elem& alpha) {
  const Field& f = x.field();
  if (k == 4) return product_constrained_four(x, alpha);
  if (k == 5) {
    const Elem one = Elem::unit(f);
    const Elem eps = alpha == one ? -one : one;
    Built b = product_constrained_four(eps * x, alpha - eps);
    b.elements.push_back(eps);
    return prefixed(eps == one ? "thm11/case2/eps=+1" : "thm11/case2/eps=-1", std::move(b));
  }
  const int base = k % 2 == 0 ? 4 : 5;
  const int pairs = (k - base) / 2;
  Built b = product_constrained(signed_x(x, pairs), base, alpha);
  append_pairs(b.elements, f, pairs);
  return prefixed("thm11/case3/pad-pairs", std::move(b));
}

// Four elements with sum s and product -1; nullopt when s is outside what
// the family and its table cover.
inline std::optional<Built> product_minus_one_four(const Elem& s) {
  const Family& fam = Catalog::instance().routable("THM12I");
  try {
    return Built{evaluate_family(fam, s.field(), {{"x", s}}), "family:THM12I"};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ExcludedPoint) throw;
  }
  try {
    return Built{witness_table_lookup(WitnessTable::SumXProductMinus1, s),
                 "table:" + std::string(to_string(WitnessTable::SumXProductMinus1))};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotInTable) throw;
  }
  return std::nullopt;
}

// Four elements with sum s and product +1.
inline Built product_plus_one_four(const Elem& s) {
  const Field& f = s.field();
  if (f->order() == 3) {
    return {witness_table_lookup(WitnessTable::F3Product1, s), "table:" + std::string(to_string(WitnessTable::F3Product1))};
  }
  if (s.is_zero()) {
    const Elem one = Elem::unit(f);
    return {{one, one, -one, -one}, "thm12ii/zero"};
  }
  if (f->characteristic() == 5) {
    // s^-1 - s^-1 - 2s - 2s = s and the product is -4 = 1
    const Elem inv = s.inverse();
    const Elem two_s = int_embed(f, 2) * s;
    return {{inv, -inv, -two_s, -two_s}, "thm12ii/char5"};
  }
  return prefixed("thm12ii/via-thm11-scaling", product_constrained_four(Elem::unit(f), s));
}

inline std::vector<Elem> ones(const Field& f, int count) { return std::vector<Elem>(static_cast<std::size_t>(count), Elem::unit(f)); }

}  // namespace detail

/// Elements a_1..a_k with product x and sum alpha (k >= 4, alpha != 0).
inline Witness decompose_product_constrained(const Elem& x, int k, const Elem& alpha) {
  if (alpha.is_zero()) fail(ErrorCode::ZeroAlpha, "the prescribed sum must be nonzero");
  if (k < 4) fail(ErrorCode::UnsupportedLength, "prescribed-sum decompositions need k >= 4");
  detail::Built b = detail::product_constrained(x, k, alpha);
  return Witness(Task{x, k, SumFixed{alpha}}, std::move(b.elements), std::move(b.route));
}

/// Elements a_1..a_k with sum x and product m (k >= 4, m = +-1).
inline Witness decompose_sum_constrained(const Elem& x, int k, int m) {
  if (m != 1 && m != -1) fail(ErrorCode::ParseError, "the prescribed product must be 1 or -1");
  if (k < 4) fail(ErrorCode::UnsupportedLength, "prescribed-product decompositions need k >= 4");
  const Field& f = x.field();
  const Task task{x, k, ProductFixed{m}};
  // reduce to four elements with sum x - (k-4), padded with ones
  const Elem reduced = x - int_embed(f, k - 4);

  if (m == 1) {
    detail::Built b = detail::product_plus_one_four(reduced);
    auto pad = detail::ones(f, k - 4);
    b.elements.insert(b.elements.end(), pad.begin(), pad.end());
    return Witness(task, std::move(b.elements), k > 4 ? "pad-ones+" + b.route : b.route);
  }

  if (f->characteristic() == 3 && x.is_zero()) {
    fail(ErrorCode::NotCovered, "product -1 with sum 0 is not covered in characteristic 3");
  }
  if (auto b = detail::product_minus_one_four(reduced)) {
    auto pad = detail::ones(f, k - 4);
    b->elements.insert(b->elements.end(), pad.begin(), pad.end());
    return Witness(task, std::move(b->elements), k > 4 ? "pad-ones+" + b->route : b->route);
  }
  // Only reachable in characteristic 3 with x - (k-4) = 0 and x != 0: pad
  // with one -1 instead, so the quadruple needs product +1 and sum 2 != 0.
  if (k >= 5) {
    detail::Built b = detail::product_plus_one_four(reduced + int_embed(f, 2));
    b.elements.push_back(-Elem::unit(f));
    auto pad = detail::ones(f, k - 5);
    b.elements.insert(b.elements.end(), pad.begin(), pad.end());
    return Witness(task, std::move(b.elements), "pad-minus-one+" + b.route);
  }
  fail(ErrorCode::NotCovered, "no construction for sum " + x.str() + " with product -1 in " + f->spec());
}

/// n = 2k elements (n even, n >= 4) whose sum and product both equal x.
inline Witness decompose_both(const Elem& x, int n) {
  if (n % 2 != 0) fail(ErrorCode::OddLength, "sum = product decompositions need an even length");
  if (n < 4) fail(ErrorCode::UnsupportedLength, "sum = product decompositions need n >= 4");
  const Field& f = x.field();
  const int half = n / 2;
  const Elem target = detail::signed_x(x, half);

  detail::Built b;
  const Family& fam = Catalog::instance().routable("THM13_K2");
  try {
    b = {evaluate_family(fam, f, {{"x", target}}), "family:THM13_K2"};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ExcludedPoint) throw;
    b = {witness_table_lookup(WitnessTable::SumXProductX, target), "table:" + std::string(to_string(WitnessTable::SumXProductX))};
  }
  if (half == 2) return Witness(Task{x, n, Both{}}, std::move(b.elements), "thm13/k2+" + b.route);

  if (half % 2 != 0) {
    for (auto& e : b.elements) e = -e;
  }
  for (int i = 0; i < half - 2; ++i) b.elements.push_back(Elem::unit(f));
  for (int i = 0; i < half - 2; ++i) b.elements.push_back(-Elem::unit(f));
  return Witness(Task{x, n, Both{}}, std::move(b.elements), "thm13/lift+" + b.route);
}

/// n = 2k+1 elements: (x, 1, -1, ..., 1, -1), or with the flag
/// (x, i, -i, 1, -1, ...) where i^2 = -1.
inline Witness decompose_odd_signed(const Elem& x, int n, bool use_sqrt_minus_one = false) {
  if (n < 1 || n % 2 == 0) fail(ErrorCode::UnsupportedLength, "odd-length decompositions need an odd n >= 1");
  const Field& f = x.field();
  const int pairs = n / 2;
  std::vector<Elem> out{x};
  if (use_sqrt_minus_one) {
    if (pairs < 1) fail(ErrorCode::UnsupportedLength, "the square-root variant needs n >= 3");
    auto i = sqrt_minus_one(f);
    if (!i) fail(ErrorCode::NoSquareRootOfMinusOne, "-1 is not a square in " + f->spec());
    out.push_back(*i);
    out.push_back(-*i);
    detail::append_pairs(out, f, pairs - 1);
    return Witness(Task{x, n, OddSigned{true}}, std::move(out), "odd/sqrt-minus-one+pad-pairs");
  }
  detail::append_pairs(out, f, pairs);
  return Witness(Task{x, n, OddSigned{false}}, std::move(out), "odd/pad-pairs");
}

/// Negates every element of an even-length witness: the sum flips sign and
/// the product is unchanged.
inline Witness negate_witness(const Witness& w) {
  if (w.size() % 2 != 0) fail(ErrorCode::OddLength, "negation preserves the product only for even length");
  const Field& f = w.task().field();
  std::vector<Elem> out;
  out.reserve(w.size());
  for (const auto& e : w.elements()) out.push_back(-e);
  const Elem sum = sum_of(out, f);
  Task task{sum, w.task().k, SumProduct{sum, product_of(out, f)}};
  return Witness(std::move(task), std::move(out), "negate+" + w.route());
}

/// Whether the task satisfies the hypotheses under which a decomposition
/// is guaranteed to exist.
inline bool hypotheses_hold(const Task& t) {
  const auto ch = t.field()->characteristic();
  return std::visit(
      [&](const auto& c) -> bool {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, SumFixed>) {
          return t.k >= 4 && !c.alpha.is_zero();
        } else if constexpr (std::is_same_v<C, ProductFixed>) {
          if (t.k < 4) return false;
          if (c.m == -1) return ch != 3 || !t.x.is_zero();
          return ch != 3 || t.field()->order() == 3;
        } else if constexpr (std::is_same_v<C, Both>) {
          return t.k >= 4 && t.k % 2 == 0;
        } else if constexpr (std::is_same_v<C, OddSigned>) {
          return t.k % 2 == 1 && (!c.use_sqrt_minus_one || sqrt_minus_one(t.field()).has_value());
        } else {
          return false;
        }
      },
      t.constraint);
}

/// Dispatches a task to the matching construction.
inline Witness decompose(const Task& t) {
  return std::visit(
      [&](const auto& c) -> Witness {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, SumFixed>) {
          return decompose_product_constrained(t.x, t.k, c.alpha);
        } else if constexpr (std::is_same_v<C, ProductFixed>) {
          return decompose_sum_constrained(t.x, t.k, c.m);
        } else if constexpr (std::is_same_v<C, Both>) {
          return decompose_both(t.x, t.k);
        } else if constexpr (std::is_same_v<C, OddSigned>) {
          return decompose_odd_signed(t.x, t.k, c.use_sqrt_minus_one);
        } else {
          fail(ErrorCode::NotCovered, "no construction for an arbitrary sum and product");
        }
      },
      t.constraint);
}

}  // namespace sumprod
