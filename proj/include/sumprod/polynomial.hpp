#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sumprod/error.hpp"
#include "sumprod/field.hpp"
#include "sumprod/rational.hpp"

namespace sumprod {

using Monomial = std::vector<std::uint32_t>;

/// Graded lexicographic order: total degree first, then exponents compared
/// from the first declared variable.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const auto da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
    const auto db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
    if (da != db) return da < db;
    return a < b;
  }
};

/// Declared variable order used for every variable list: x < s < t < q.
inline std::vector<std::string> canonical_variables(std::set<std::string> names) {
  static const std::vector<std::string> declared{"x", "s", "t", "q"};
  std::vector<std::string> out;
  for (const auto& v : declared) {
    if (names.erase(v) > 0) out.push_back(v);
  }
  out.insert(out.end(), names.begin(), names.end());
  return out;
}

using Assignment = std::map<std::string, Elem>;

/// Sparse multivariate polynomial with big-integer coefficients. No zero
/// coefficient is ever stored.
class MultiPoly {
 public:
  using Terms = std::map<Monomial, BigInt, GrlexLess>;

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static MultiPoly constant(std::vector<std::string> vars, const BigInt& c) {
    MultiPoly p(std::move(vars));
    if (c != 0) p.terms_.emplace(Monomial(p.vars_.size(), 0), c);
    return p;
  }

  static MultiPoly variable(std::vector<std::string> vars, const std::string& name) {
    MultiPoly p(std::move(vars));
    auto it = std::find(p.vars_.begin(), p.vars_.end(), name);
    if (it == p.vars_.end()) fail(ErrorCode::VariableMismatch, "unknown variable '" + name + "'");
    Monomial m(p.vars_.size(), 0);
    m[static_cast<std::size_t>(it - p.vars_.begin())] = 1;
    p.terms_.emplace(std::move(m), 1);
    return p;
  }

  /// Parses integer coefficients, variables, parentheses, +, -, * and ^.
  static MultiPoly parse(const std::vector<std::string>& vars, std::string_view text);

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  std::uint64_t total_degree() const {
    if (terms_.empty()) return 0;
    const auto& m = terms_.rbegin()->first;
    return std::accumulate(m.begin(), m.end(), std::uint64_t{0});
  }

  /// gcd of the absolute values of all coefficients (0 for the zero polynomial).
  BigInt content() const {
    BigInt g = 0;
    for (const auto& [m, c] : terms_) g = boost::multiprecision::gcd(g, abs(c));
    return g;
  }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    check_vars(a, b);
    MultiPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    check_vars(a, b);
    MultiPoly r(a.vars_);
    Monomial m(a.vars_.size());
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }

  MultiPoly pow(unsigned e) const {
    MultiPoly result = constant(vars_, 1);
    MultiPoly base = *this;
    while (e > 0) {
      if ((e & 1U) != 0) result = result * base;
      e >>= 1U;
      if (e > 0) base = base * base;
    }
    return result;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    check_vars(a, b);
    return a.terms_ == b.terms_;
  }

  /// Exact value at a point; coefficients pass through int_embed.
  Elem eval(const Field& field, const Assignment& point) const {
    std::vector<Elem> values;
    values.reserve(vars_.size());
    for (const auto& v : vars_) {
      auto it = point.find(v);
      if (it == point.end()) fail(ErrorCode::VariableMismatch, "no value for variable '" + v + "'");
      if (!it->second.field()->same_as(*field)) fail(ErrorCode::FieldMismatch, "value for '" + v + "' is not in " + field->spec());
      values.push_back(it->second);
    }
    Elem acc = Elem::zero(field);
    for (const auto& [m, c] : terms_) {
      Elem term = int_embed(field, c);
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] > 0) term *= values[i].pow(m[i]);
      }
      acc += term;
    }
    return acc;
  }

  /// Expanded text, highest grlex term first, e.g. "x^3+7*x^2+15*x+9".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      const bool negative = c < 0;
      const BigInt mag = negative ? BigInt(-c) : c;
      if (negative) {
        out += '-';
      } else if (!first) {
        out += '+';
      }
      std::string mono;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!mono.empty()) mono += '*';
        mono += vars_[i];
        if (m[i] > 1) mono += '^' + std::to_string(m[i]);
      }
      if (mono.empty()) {
        out += mag.str();
      } else if (mag == 1) {
        out += mono;
      } else {
        out += mag.str() + '*' + mono;
      }
      first = false;
    }
    return out;
  }

 private:
  static void check_vars(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_) fail(ErrorCode::VariableMismatch, "polynomials over different variable lists");
  }

  void add_term(const Monomial& m, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::vector<std::string> vars_;
  Terms terms_;
};

/// Quotient of two polynomials. Never reduced to lowest terms.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.variables() != den_.variables()) fail(ErrorCode::VariableMismatch, "numerator and denominator variables differ");
    if (den_.is_zero()) fail(ErrorCode::DivisionByZero, "zero denominator polynomial");
  }
  explicit RatFunc(MultiPoly num) : num_(std::move(num)), den_(MultiPoly::constant(num_.variables(), 1)) {}

  /// As MultiPoly::parse, plus '/' with the precedence of '*'.
  static RatFunc parse(const std::vector<std::string>& vars, std::string_view text);

  const MultiPoly& num() const noexcept { return num_; }
  const MultiPoly& den() const noexcept { return den_; }
  const std::vector<std::string>& variables() const noexcept { return num_.variables(); }

  RatFunc operator-() const { return RatFunc(-num_, den_); }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) { return RatFunc(a.num_ * b.num_, a.den_ * b.den_); }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.num_.is_zero()) fail(ErrorCode::DivisionByZero, "division by the zero polynomial");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFunc pow(unsigned e) const { return RatFunc(num_.pow(e), den_.pow(e)); }

  std::string str() const { return "(" + num_.str() + ")/(" + den_.str() + ")"; }

 private:
  MultiPoly num_;
  MultiPoly den_;
};

namespace detail {

// Recursive-descent parser shared by MultiPoly::parse and RatFunc::parse.
class ExprParser {
 public:
  ExprParser(const std::vector<std::string>& vars, std::string_view text, bool allow_division)
      : vars_(vars), text_(text), allow_division_(allow_division) {}

  RatFunc run() {
    RatFunc r = expr();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  RatFunc expr() {
    RatFunc acc = term();
    while (true) {
      skip_ws();
      if (peek('+')) {
        ++pos_;
        acc = acc + term();
      } else if (peek('-')) {
        ++pos_;
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  RatFunc term() {
    RatFunc acc = unary();
    while (true) {
      skip_ws();
      if (peek('*')) {
        ++pos_;
        acc = acc * unary();
      } else if (peek('/')) {
        if (!allow_division_) error("'/' is not allowed in a polynomial");
        ++pos_;
        acc = acc / unary();
      } else {
        return acc;
      }
    }
  }

  RatFunc unary() {
    skip_ws();
    if (peek('-')) {
      ++pos_;
      return -unary();
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  RatFunc power() {
    RatFunc base = atom();
    skip_ws();
    if (peek('^')) {
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) error("expected exponent");
      return base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  RatFunc atom() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc inner = expr();
      skip_ws();
      if (!peek(')')) error("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return RatFunc(MultiPoly::constant(vars_, BigInt(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (std::find(vars_.begin(), vars_.end(), name) == vars_.end()) {
        fail(ErrorCode::VariableMismatch, "unknown variable '" + name + "' in '" + std::string(text_) + "'");
      }
      return RatFunc(MultiPoly::variable(vars_, name));
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  const std::vector<std::string>& vars_;
  std::string_view text_;
  bool allow_division_;
  std::size_t pos_ = 0;
};

inline void check_same_vars(const std::vector<RatFunc>& fs, const RatFunc& target) {
  for (const auto& f : fs) {
    if (f.variables() != target.variables()) fail(ErrorCode::VariableMismatch, "rational functions over different variable lists");
  }
}

inline std::set<std::uint64_t> prime_factors(BigInt n) {
  std::set<std::uint64_t> out;
  if (n < 0) n = -n;
  for (std::uint64_t d = 2; BigInt(d) * d <= n; ++d) {
    while (n % d == 0) {
      out.insert(d);
      n /= d;
    }
  }
  if (n > 1) out.insert(n.convert_to<std::uint64_t>());
  return out;
}

}  // namespace detail

inline MultiPoly MultiPoly::parse(const std::vector<std::string>& vars, std::string_view text) {
  RatFunc r = detail::ExprParser(vars, text, false).run();
  return r.num();
}

inline RatFunc RatFunc::parse(const std::vector<std::string>& vars, std::string_view text) {
  return detail::ExprParser(vars, text, true).run();
}

/// Numerator of (sum of fs) - target after clearing to the common
/// denominator prod(den_i) * den_target. Zero iff the sum identity holds.
inline MultiPoly sum_identity_residual(const std::vector<RatFunc>& fs, const RatFunc& target) {
  detail::check_same_vars(fs, target);
  const auto& vars = target.variables();
  MultiPoly all_dens = MultiPoly::constant(vars, 1);
  for (const auto& f : fs) all_dens = all_dens * f.den();
  MultiPoly lhs(vars);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    MultiPoly term = fs[i].num();
    for (std::size_t j = 0; j < fs.size(); ++j) {
      if (j != i) term = term * fs[j].den();
    }
    lhs = lhs + term;
  }
  return lhs * target.den() - target.num() * all_dens;
}

/// prod(num_i) * den_target - prod(den_i) * num_target.
inline MultiPoly product_identity_residual(const std::vector<RatFunc>& fs, const RatFunc& target) {
  detail::check_same_vars(fs, target);
  const auto& vars = target.variables();
  MultiPoly nums = MultiPoly::constant(vars, 1);
  MultiPoly dens = MultiPoly::constant(vars, 1);
  for (const auto& f : fs) {
    nums = nums * f.num();
    dens = dens * f.den();
  }
  return nums * target.den() - dens * target.num();
}

inline bool ratfunc_sum_identity(const std::vector<RatFunc>& fs, const RatFunc& target) {
  return sum_identity_residual(fs, target).is_zero();
}

inline bool ratfunc_prod_identity(const std::vector<RatFunc>& fs, const RatFunc& target) {
  return product_identity_residual(fs, target).is_zero();
}

/// Primes p for which some denominator is identically zero mod p, i.e. p
/// divides the content of that denominator.
inline std::set<std::uint64_t> bad_primes(const std::vector<RatFunc>& fs) {
  std::set<std::uint64_t> out;
  for (const auto& f : fs) out.merge(detail::prime_factors(f.den().content()));
  return out;
}

inline Elem eval_ratfunc(const RatFunc& f, const Field& field, const Assignment& point) {
  const Elem den = f.den().eval(field, point);
  if (den.is_zero()) fail(ErrorCode::DenominatorVanishes, "denominator " + f.den().str() + " vanishes in " + field->spec());
  return f.num().eval(field, point) / den;
}

}  // namespace sumprod
