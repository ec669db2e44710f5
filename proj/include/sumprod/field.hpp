#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sumprod/error.hpp"
#include "sumprod/rational.hpp"

namespace sumprod {

enum class FieldKind { Rationals, PrimeField, ExtensionField };

/// Largest q = p^n accepted for extension fields.
inline constexpr std::uint64_t kMaxExtensionOrder = 10000;
/// Prime-field moduli must stay below 2^31 so products fit in 64 bits.
inline constexpr std::uint64_t kMaxPrime = (std::uint64_t{1} << 31) - 1;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Dense polynomials over GF(p), coefficient i is the x^i term.
using Coeffs = std::vector<std::uint32_t>;

inline void trim(Coeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

inline Coeffs poly_mod(Coeffs a, const Coeffs& m, std::uint32_t p) {
  // m is monic
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - lead) * m[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

inline Coeffs poly_mul(const Coeffs& a, const Coeffs& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  }
  trim(r);
  return r;
}

inline Coeffs decode(std::uint32_t code, std::uint32_t p, unsigned n) {
  Coeffs c(n, 0);
  for (unsigned i = 0; i < n; ++i) {
    c[i] = code % p;
    code /= p;
  }
  trim(c);
  return c;
}

inline std::uint32_t encode(const Coeffs& c, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = c.size(); i-- > 0;) code = code * p + c[i];
  return code;
}

inline bool is_irreducible(const Coeffs& f, std::uint32_t p) {
  const unsigned n = static_cast<unsigned>(f.size() - 1);
  if (n <= 1) return true;
  // trial division by every monic polynomial of degree 1..n/2
  for (unsigned d = 1; d <= n / 2; ++d) {
    const std::uint64_t count = ipow(p, d);
    for (std::uint64_t low = 0; low < count; ++low) {
      Coeffs g = decode(static_cast<std::uint32_t>(low), p, d);
      g.resize(d, 0);
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

/// Lexicographically smallest monic irreducible of degree n over GF(p),
/// ordering candidates by the base-p code of (c0, ..., c_{n-1}).
inline Coeffs smallest_irreducible(std::uint32_t p, unsigned n) {
  const std::uint64_t count = ipow(p, n);
  for (std::uint64_t low = 0; low < count; ++low) {
    Coeffs f = decode(static_cast<std::uint32_t>(low), p, n);
    f.resize(n, 0);
    f.push_back(1);
    if (is_irreducible(f, p)) return f;
  }
  fail(ErrorCode::InvalidSpec, "no irreducible polynomial found");
}

}  // namespace detail

/// Immutable description of one of the supported fields. Finite-field
/// elements are encoded as integers in [0, q): the least residue for GF(p),
/// and the base-p code c0 + c1*p + ... for GF(p^n).
class FieldDesc {
 public:
  static std::shared_ptr<const FieldDesc> rationals() {
    return std::shared_ptr<const FieldDesc>(new FieldDesc(FieldKind::Rationals, 0, 0));
  }

  static std::shared_ptr<const FieldDesc> prime_field(std::uint64_t p) {
    if (p > kMaxPrime) fail(ErrorCode::BoundExceeded, "prime modulus must be below 2^31");
    validate_prime(p);
    return std::shared_ptr<const FieldDesc>(new FieldDesc(FieldKind::PrimeField, static_cast<std::uint32_t>(p), 1));
  }

  static std::shared_ptr<const FieldDesc> extension_field(std::uint64_t p, std::uint64_t n) {
    if (p != 2 && p > kMaxExtensionOrder) fail(ErrorCode::BoundExceeded, "p^n must not exceed 10^4");
    validate_prime(p);
    if (n < 1) fail(ErrorCode::InvalidSpec, "extension degree must be >= 1");
    std::uint64_t q = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
      q *= p;
      if (q > kMaxExtensionOrder) fail(ErrorCode::BoundExceeded, "p^n must not exceed 10^4");
    }
    auto* f = new FieldDesc(FieldKind::ExtensionField, static_cast<std::uint32_t>(p), static_cast<unsigned>(n));
    f->build_tables();
    return std::shared_ptr<const FieldDesc>(f);
  }

  FieldKind kind() const noexcept { return kind_; }
  std::uint32_t characteristic() const noexcept { return p_; }
  unsigned degree() const noexcept { return n_; }
  bool is_finite() const noexcept { return kind_ != FieldKind::Rationals; }
  /// Number of elements; 0 for the rationals.
  std::uint64_t order() const noexcept { return is_finite() ? detail::ipow(p_, n_) : 0; }
  /// Monic modulus c0..cn for extension fields, empty otherwise.
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  /// The spec string this descriptor round-trips to ("Q", "Fp:7", "Fq:3^2").
  std::string spec() const {
    switch (kind_) {
      case FieldKind::Rationals: return "Q";
      case FieldKind::PrimeField: return "Fp:" + std::to_string(p_);
      case FieldKind::ExtensionField: return "Fq:" + std::to_string(p_) + "^" + std::to_string(n_);
    }
    return {};
  }

  bool same_as(const FieldDesc& o) const noexcept { return kind_ == o.kind_ && p_ == o.p_ && n_ == o.n_; }

  // ---- encoded finite-field arithmetic -----------------------------------

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (kind_ == FieldKind::PrimeField) return static_cast<std::uint32_t>((std::uint64_t{a} + b) % p_);
    std::uint32_t r = 0;
    std::uint32_t place = 1;
    for (unsigned i = 0; i < n_; ++i) {
      r += ((a % p_ + b % p_) % p_) * place;
      a /= p_;
      b /= p_;
      place *= p_;
    }
    return r;
  }

  std::uint32_t neg(std::uint32_t a) const {
    if (kind_ == FieldKind::PrimeField) return a == 0 ? 0 : p_ - a;
    std::uint32_t r = 0;
    std::uint32_t place = 1;
    for (unsigned i = 0; i < n_; ++i) {
      std::uint32_t d = a % p_;
      r += (d == 0 ? 0 : p_ - d) * place;
      a /= p_;
      place *= p_;
    }
    return r;
  }

  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (kind_ == FieldKind::PrimeField) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
    if (a == 0 || b == 0) return 0;
    const std::uint32_t group = static_cast<std::uint32_t>(exp_.size());
    return exp_[(log_[a] + log_[b]) % group];
  }

  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) fail(ErrorCode::DivisionByZero, "inverse of 0 in " + spec());
    if (kind_ == FieldKind::PrimeField) {
      // extended Euclid on signed 64-bit values
      std::int64_t t = 0, new_t = 1, r = p_, new_r = a;
      while (new_r != 0) {
        std::int64_t quot = r / new_r;
        std::int64_t tmp = t - quot * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - quot * new_r;
        r = new_r;
        new_r = tmp;
      }
      return static_cast<std::uint32_t>(t < 0 ? t + p_ : t);
    }
    const std::uint32_t group = static_cast<std::uint32_t>(exp_.size());
    return exp_[(group - log_[a]) % group];
  }

  /// Image of an integer under Z -> F.
  std::uint32_t from_int(const BigInt& m) const {
    BigInt r = m % p_;
    if (r < 0) r += p_;
    return r.convert_to<std::uint32_t>();
  }

  std::uint32_t one() const noexcept { return 1; }

 private:
  FieldDesc(FieldKind kind, std::uint32_t p, unsigned n) : kind_(kind), p_(p), n_(n) {}

  static void validate_prime(std::uint64_t p) {
    if (p == 2) fail(ErrorCode::EvenCharacteristic, "characteristic 2 is not supported");
    if (!detail::is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  }

  void build_tables() {
    modulus_ = detail::smallest_irreducible(p_, n_);
    const std::uint32_t q = static_cast<std::uint32_t>(order());
    const std::uint32_t group = q - 1;
    exp_.assign(group, 0);
    log_.assign(q, 0);
    if (group == 0) return;
    for (std::uint32_t g = 1; g < q; ++g) {
      const detail::Coeffs gen = detail::decode(g, p_, n_);
      detail::Coeffs cur{1};
      std::uint32_t period = 0;
      bool primitive = true;
      for (std::uint32_t e = 0; e < group; ++e) {
        const std::uint32_t code = detail::encode(cur, p_);
        if (e > 0 && code == 1) {
          primitive = false;
          break;
        }
        exp_[e] = code;
        log_[code] = e;
        cur = detail::poly_mod(detail::poly_mul(cur, gen, p_), modulus_, p_);
        ++period;
      }
      if (primitive && period == group) return;
    }
    fail(ErrorCode::InvalidSpec, "no primitive element found");
  }

  FieldKind kind_;
  std::uint32_t p_;
  unsigned n_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

using Field = std::shared_ptr<const FieldDesc>;

/// Parses "Q", "Fp:<p>" or "Fq:<p>^<n>".
inline Field make_field(std::string_view spec) {
  auto parse_uint = [&](std::string_view s) -> std::uint64_t {
    if (s.empty() || s.size() > 12) fail(ErrorCode::InvalidSpec, "bad number in field spec '" + std::string(spec) + "'");
    std::uint64_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') fail(ErrorCode::InvalidSpec, "bad number in field spec '" + std::string(spec) + "'");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
  };
  if (spec == "Q") return FieldDesc::rationals();
  if (spec.starts_with("Fp:")) return FieldDesc::prime_field(parse_uint(spec.substr(3)));
  if (spec.starts_with("Fq:")) {
    std::string_view rest = spec.substr(3);
    auto caret = rest.find('^');
    if (caret == std::string_view::npos) fail(ErrorCode::InvalidSpec, "expected Fq:<p>^<n>, got '" + std::string(spec) + "'");
    return FieldDesc::extension_field(parse_uint(rest.substr(0, caret)), parse_uint(rest.substr(caret + 1)));
  }
  fail(ErrorCode::InvalidSpec, "unrecognised field spec '" + std::string(spec) + "'");
}

/// A value in a particular field. Rationals for Q, the encoded residue for
/// finite fields.
class Elem {
 public:
  Elem(Field field, Rational value) : field_(std::move(field)), value_(std::move(value)) {
    if (field_->is_finite()) {
      fail(ErrorCode::FieldMismatch, "rational value given for " + field_->spec());
    }
  }
  Elem(Field field, std::uint32_t code) : field_(std::move(field)), value_(code) {
    if (!field_->is_finite()) fail(ErrorCode::FieldMismatch, "residue given for Q");
    if (code >= field_->order()) fail(ErrorCode::InvalidSpec, "residue out of range");
  }

  const Field& field() const noexcept { return field_; }
  bool is_rational() const noexcept { return std::holds_alternative<Rational>(value_); }
  const Rational& rational() const { return std::get<Rational>(value_); }
  std::uint32_t code() const { return std::get<std::uint32_t>(value_); }

  bool is_zero() const { return is_rational() ? rational().is_zero() : code() == 0; }

  bool is_canonical() const {
    if (is_rational()) return rational().is_canonical();
    return code() < field_->order();
  }

  Elem operator-() const {
    if (is_rational()) return Elem(field_, -rational());
    return Elem(field_, field_->neg(code()));
  }

  Elem inverse() const {
    if (is_rational()) return Elem(field_, rational().inverse());
    return Elem(field_, field_->inv(code()));
  }

  /// Integer power; negative exponents go through the inverse.
  Elem pow(BigInt e) const {
    Elem base = e < 0 ? inverse() : *this;
    if (e < 0) e = -e;
    Elem result = unit(field_);
    while (e > 0) {
      if ((e & 1) != 0) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  friend Elem operator+(const Elem& a, const Elem& b) {
    check_same(a, b);
    if (a.is_rational()) return Elem(a.field_, a.rational() + b.rational());
    return Elem(a.field_, a.field_->add(a.code(), b.code()));
  }
  friend Elem operator-(const Elem& a, const Elem& b) {
    check_same(a, b);
    if (a.is_rational()) return Elem(a.field_, a.rational() - b.rational());
    return Elem(a.field_, a.field_->sub(a.code(), b.code()));
  }
  friend Elem operator*(const Elem& a, const Elem& b) {
    check_same(a, b);
    if (a.is_rational()) return Elem(a.field_, a.rational() * b.rational());
    return Elem(a.field_, a.field_->mul(a.code(), b.code()));
  }
  friend Elem operator/(const Elem& a, const Elem& b) {
    check_same(a, b);
    return a * b.inverse();
  }
  Elem& operator+=(const Elem& o) { return *this = *this + o; }
  Elem& operator-=(const Elem& o) { return *this = *this - o; }
  Elem& operator*=(const Elem& o) { return *this = *this * o; }

  friend bool operator==(const Elem& a, const Elem& b) {
    return a.field_->same_as(*b.field_) && a.value_ == b.value_;
  }

  /// Canonical text: "n" or "n/d" for Q, the least residue for GF(p),
  /// "c0,c1,...,c(n-1)" for GF(p^n).
  std::string str() const {
    if (is_rational()) return rational().str();
    if (field_->kind() == FieldKind::PrimeField) return std::to_string(code());
    std::string out;
    std::uint32_t c = code();
    for (unsigned i = 0; i < field_->degree(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(c % field_->characteristic());
      c /= field_->characteristic();
    }
    return out;
  }
  friend std::ostream& operator<<(std::ostream& os, const Elem& e) { return os << e.str(); }

  static Elem unit(const Field& f) { return f->is_finite() ? Elem(f, f->one()) : Elem(f, Rational(1)); }
  static Elem zero(const Field& f) { return f->is_finite() ? Elem(f, std::uint32_t{0}) : Elem(f, Rational(0)); }

 private:
  static void check_same(const Elem& a, const Elem& b) {
    if (!a.field_->same_as(*b.field_)) {
      fail(ErrorCode::FieldMismatch, "operands from " + a.field_->spec() + " and " + b.field_->spec());
    }
  }

  Field field_;
  std::variant<Rational, std::uint32_t> value_;
};

/// m * 1_F.
inline Elem int_embed(const Field& f, const BigInt& m) {
  if (!f->is_finite()) return Elem(f, Rational(m));
  return Elem(f, f->from_int(m));
}
inline Elem int_embed(const Field& f, long long m) { return int_embed(f, BigInt(m)); }

/// Image of a rational constant; DivisionByZero when its denominator is 0 in F.
inline Elem rational_embed(const Field& f, const Rational& r) {
  if (!f->is_finite()) return Elem(f, r);
  const Elem den = int_embed(f, r.den());
  if (den.is_zero()) {
    fail(ErrorCode::DivisionByZero, "constant " + r.str() + " is undefined in " + f->spec());
  }
  return int_embed(f, r.num()) / den;
}

/// Element text grammar: rationals "n" or "n/d"; GF(p) signed integers (a
/// fraction "n/d" is also accepted and embedded); GF(p^n) "c0,c1,...".
inline Elem parse_elem(const Field& f, std::string_view text) {
  if (f->kind() == FieldKind::ExtensionField && text.find(',') != std::string_view::npos) {
    std::vector<BigInt> coeffs;
    std::size_t start = 0;
    while (true) {
      auto comma = text.find(',', start);
      coeffs.push_back(parse_bigint(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (coeffs.size() != f->degree()) {
      fail(ErrorCode::ParseError, "expected " + std::to_string(f->degree()) + " coefficients in '" + std::string(text) + "'");
    }
    std::uint32_t code = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) code = code * f->characteristic() + f->from_int(coeffs[i]) % f->characteristic();
    return Elem(f, code);
  }
  return rational_embed(f, Rational::parse(text));
}

/// Some i with i^2 = -1, if the field has one. Deterministic: the first
/// c^((q-1)/4) that works, scanning c upward from 1.
inline std::optional<Elem> sqrt_minus_one(const Field& f) {
  if (!f->is_finite()) return std::nullopt;
  const std::uint64_t q = f->order();
  if (q % 4 != 1) return std::nullopt;
  const Elem minus_one = -Elem::unit(f);
  const std::uint64_t limit = q < 1000 ? q : 1000;
  for (std::uint64_t c = 1; c < limit; ++c) {
    Elem i = Elem(f, static_cast<std::uint32_t>(c)).pow(BigInt((q - 1) / 4));
    if (i * i == minus_one) return i;
  }
  return std::nullopt;
}

}  // namespace sumprod
