#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "sumprod/decomposer.hpp"
#include "sumprod/error.hpp"
#include "sumprod/field.hpp"

namespace sumprod {

/// Oracle constraints are affine in x: the tuple must have
/// sum = sum_coef*x + sum_const and product = product_coef*x + product_const.
struct OracleConstraint {
  std::string label;
  std::uint32_t sum_coef;
  std::uint32_t sum_const;
  std::uint32_t product_coef;
  std::uint32_t product_const;

  std::uint32_t sum_at(const FieldDesc& f, std::uint32_t x) const { return f.add(f.mul(sum_coef, x), sum_const); }
  std::uint32_t product_at(const FieldDesc& f, std::uint32_t x) const {
    return f.add(f.mul(product_coef, x), product_const);
  }

  /// Sum alpha, product x.
  static OracleConstraint sum_fixed(const Elem& alpha) {
    const FieldDesc& f = *alpha.field();
    return {"sum=" + alpha.str() + " product=x", 0, alpha.code(), f.one(), 0};
  }
  /// Sum x, product m.
  static OracleConstraint product_fixed(const Field& f, int m) {
    return {"sum=x product=" + std::to_string(m), f->one(), 0, 0, f->from_int(m)};
  }
  /// Sum x, product x.
  static OracleConstraint both(const Field& f) { return {"sum=x product=x", f->one(), 0, f->one(), 0}; }
  /// Sum x, product sign*x.
  static OracleConstraint signed_product(const Field& f, int sign) {
    return {sign > 0 ? "sum=x product=x" : "sum=x product=-x", f->one(), 0, f->from_int(sign), 0};
  }
  /// a+b+c+d-1 = x = abcd.
  static OracleConstraint conjecture(const Field& f) { return {"sum-1=x product=x", f->one(), f->one(), f->one(), 0}; }
};

struct ScanRecord {
  Elem x;
  bool exists;
  std::vector<Elem> witness;  // lexicographically first witness, empty if none
};

struct ScanReport {
  Field field;
  int k;
  OracleConstraint constraint;
  std::vector<ScanRecord> records;  // ascending x code, every x once

  std::size_t count_exists() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.exists ? 1 : 0;
    return n;
  }
  std::vector<Elem> missing() const {
    std::vector<Elem> out;
    for (const auto& r : records) {
      if (!r.exists) out.push_back(r.x);
    }
    return out;
  }
  const ScanRecord& at(const Elem& x) const { return records.at(x.code()); }
};

inline constexpr std::uint64_t kMaxScanOrderK4 = 10000;
inline constexpr std::uint64_t kMaxScanOrderK5 = 300;

namespace detail {

// Lexicographically first (a_1..a_k) over codes with the prescribed sum and
// product; a_k is solved from the sum.
inline std::optional<std::vector<std::uint32_t>> first_tuple(const FieldDesc& f, int k, std::uint32_t sum,
                                                              std::uint32_t product) {
  const auto q = static_cast<std::uint32_t>(f.order());
  std::vector<std::uint32_t> a(static_cast<std::size_t>(k), 0);
  // prefix_sum[i] / prefix_product[i] cover a_0..a_{i-1}
  std::vector<std::uint32_t> prefix_sum(static_cast<std::size_t>(k), 0);
  std::vector<std::uint32_t> prefix_product(static_cast<std::size_t>(k), f.one());
  const int free = k - 1;

  std::function<bool(int)> descend = [&](int depth) -> bool {
    if (depth == free) {
      const std::uint32_t last = f.sub(sum, prefix_sum[static_cast<std::size_t>(depth)]);
      if (f.mul(prefix_product[static_cast<std::size_t>(depth)], last) != product) return false;
      a[static_cast<std::size_t>(depth)] = last;
      return true;
    }
    const auto d = static_cast<std::size_t>(depth);
    for (std::uint32_t v = 0; v < q; ++v) {
      a[d] = v;
      prefix_sum[d + 1] = f.add(prefix_sum[d], v);
      prefix_product[d + 1] = f.mul(prefix_product[d], v);
      if (descend(depth + 1)) return true;
    }
    return false;
  };
  if (descend(0)) return a;
  return std::nullopt;
}

inline void check_scan_bounds(const Field& field, int k) {
  if (!field->is_finite()) fail(ErrorCode::InvalidSpec, "exhaustive scans need a finite field");
  if (k != 4 && k != 5) fail(ErrorCode::UnsupportedLength, "exhaustive scans support k = 4 or 5");
  const std::uint64_t limit = k == 4 ? kMaxScanOrderK4 : kMaxScanOrderK5;
  if (field->order() > limit) {
    fail(ErrorCode::FieldTooLarge, field->spec() + " is too large for a k=" + std::to_string(k) + " scan");
  }
}

}  // namespace detail

/// Existence table over every x of a finite field. Each record is passed to
/// on_record as soon as it is complete, in ascending x order.
inline ScanReport exhaustive_exists(const Field& field, int k, const OracleConstraint& constraint,
                                    const std::function<void(const ScanRecord&)>& on_record = {}) {
  detail::check_scan_bounds(field, k);
  ScanReport report{field, k, constraint, {}};
  const auto q = static_cast<std::uint32_t>(field->order());
  report.records.reserve(q);
  for (std::uint32_t x = 0; x < q; ++x) {
    auto found = detail::first_tuple(*field, k, constraint.sum_at(*field, x), constraint.product_at(*field, x));
    ScanRecord rec{Elem(field, x), found.has_value(), {}};
    if (found) {
      for (auto v : *found) rec.witness.emplace_back(field, v);
    }
    if (on_record) on_record(rec);
    report.records.push_back(std::move(rec));
  }
  return report;
}

// ---- cross-check ----------------------------------------------------------

enum class CheckKind { SumFixed, ProductMinusOne, ProductPlusOne, Both, OddSigned };

inline std::string_view to_string(CheckKind c) {
  switch (c) {
    case CheckKind::SumFixed: return "sum-fixed";
    case CheckKind::ProductMinusOne: return "product=-1";
    case CheckKind::ProductPlusOne: return "product=+1";
    case CheckKind::Both: return "both";
    case CheckKind::OddSigned: return "odd-signed";
  }
  return "unknown";
}

inline const std::vector<CheckKind>& all_check_kinds() {
  static const std::vector<CheckKind> kinds{CheckKind::SumFixed, CheckKind::ProductMinusOne, CheckKind::ProductPlusOne,
                                            CheckKind::Both, CheckKind::OddSigned};
  return kinds;
}

struct CrossCheckReport {
  Field field;
  std::size_t tasks = 0;
  std::size_t succeeded = 0;
  /// decomposer declined a task whose hypotheses do not hold
  std::size_t not_covered = 0;
  /// decomposer succeeded although the hypotheses do not hold
  std::size_t beyond_hypotheses = 0;
  std::size_t oracle_checks = 0;
  std::vector<std::string> divergences;

  bool clean() const { return divergences.empty(); }
};

/// Runs the decomposer on every task over the field for k in [k_min, k_max]
/// and the given constraint kinds, and compares against the oracle for
/// k = 4, 5.
inline CrossCheckReport cross_check_decomposer(const Field& field, int k_min, int k_max,
                                               const std::vector<CheckKind>& kinds = all_check_kinds()) {
  if (!field->is_finite() || field->order() > 101) fail(ErrorCode::FieldTooLarge, "cross-checks need q <= 101");
  CrossCheckReport report;
  report.field = field;
  const auto q = static_cast<std::uint32_t>(field->order());
  std::map<std::tuple<int, std::string>, ScanReport> scans;

  auto oracle = [&](int k, const OracleConstraint& c) -> const ScanReport& {
    auto key = std::make_tuple(k, c.label);
    auto it = scans.find(key);
    if (it == scans.end()) it = scans.emplace(key, exhaustive_exists(field, k, c)).first;
    return it->second;
  };

  auto run = [&](const Task& task, std::optional<OracleConstraint> oc) {
    ++report.tasks;
    const bool hyp = hypotheses_hold(task);
    std::string where = std::string(field->spec()) + " k=" + std::to_string(task.k) + " x=" + task.x.str();
    if (const auto* s = std::get_if<SumFixed>(&task.constraint)) where += " alpha=" + s->alpha.str();
    if (const auto* p = std::get_if<ProductFixed>(&task.constraint)) where += " m=" + std::to_string(p->m);
    if (std::holds_alternative<Both>(task.constraint)) where += " both";
    if (std::holds_alternative<OddSigned>(task.constraint)) where += " odd";

    std::optional<bool> exists;
    if (oc && (task.k == 4 || task.k == 5)) {
      ++report.oracle_checks;
      exists = oracle(task.k, *oc).at(task.x).exists;
      if (hyp && !*exists) report.divergences.push_back(where + ": oracle finds no witness although hypotheses hold");
    }
    try {
      Witness w = decompose(task);
      if (!verify(w.elements(), expected_sum(task), expected_product(task))) {
        report.divergences.push_back(where + ": witness does not verify");
      } else if (exists && !*exists) {
        report.divergences.push_back(where + ": decomposer witness outside the oracle's feasible set");
      }
      ++report.succeeded;
      if (!hyp) ++report.beyond_hypotheses;
    } catch (const Error& e) {
      if (hyp) {
        report.divergences.push_back(where + ": decomposer failed with " + std::string(to_string(e.code())));
      } else {
        ++report.not_covered;
      }
    }
  };

  for (int k = k_min; k <= k_max; ++k) {
    for (CheckKind kind : kinds) {
      for (std::uint32_t xc = 0; xc < q; ++xc) {
        const Elem x(field, xc);
        switch (kind) {
          case CheckKind::SumFixed:
            if (k < 4) break;
            for (std::uint32_t ac = 1; ac < q; ++ac) {
              const Elem alpha(field, ac);
              run(Task{x, k, SumFixed{alpha}}, OracleConstraint::sum_fixed(alpha));
            }
            break;
          case CheckKind::ProductMinusOne:
            if (k >= 4) run(Task{x, k, ProductFixed{-1}}, OracleConstraint::product_fixed(field, -1));
            break;
          case CheckKind::ProductPlusOne:
            if (k >= 4) run(Task{x, k, ProductFixed{1}}, OracleConstraint::product_fixed(field, 1));
            break;
          case CheckKind::Both:
            if (k >= 4 && k % 2 == 0) run(Task{x, k, Both{}}, OracleConstraint::both(field));
            break;
          case CheckKind::OddSigned:
            if (k % 2 == 1) {
              run(Task{x, k, OddSigned{false}}, OracleConstraint::signed_product(field, (k / 2) % 2 == 0 ? 1 : -1));
            }
            break;
        }
      }
    }
  }
  return report;
}

// ---- conjecture scanner and characteristic-3 probe --------------------------

struct ConjectureReport {
  std::vector<ScanReport> fields;
  std::vector<std::pair<std::uint32_t, Elem>> counterexamples;  // (p, x)

  bool holds() const { return counterexamples.empty(); }
};

/// Searches a+b+c+d-1 = x = abcd over GF(p) for every odd prime 5 <= p <= max_prime.
inline ConjectureReport conjecture_scan(std::uint32_t max_prime,
                                        const std::function<void(const Field&, const ScanRecord&)>& on_record = {}) {
  if (max_prime > 1000) fail(ErrorCode::BoundExceeded, "conjecture scans are limited to p <= 1000");
  ConjectureReport out;
  for (std::uint32_t p = 5; p <= max_prime; p += 2) {
    if (!detail::is_prime(p)) continue;
    const Field f = FieldDesc::prime_field(p);
    auto report = exhaustive_exists(f, 4, OracleConstraint::conjecture(f), [&](const ScanRecord& r) {
      if (on_record) on_record(f, r);
    });
    for (const auto& x : report.missing()) out.counterexamples.emplace_back(p, x);
    out.fields.push_back(std::move(report));
  }
  return out;
}

struct Char3ProbeReport {
  std::vector<ScanReport> fields;

  /// True when every x of every probed field has a 4-tuple with sum x and product 1.
  bool supports_guess() const {
    for (const auto& r : fields) {
      if (r.count_exists() != r.records.size()) return false;
    }
    return true;
  }
};

/// Sum x, product 1, four elements, over F_3, F_9, F_27, ... up to max_q.
inline Char3ProbeReport char3_probe(std::uint64_t max_q) {
  if (max_q > kMaxScanOrderK4) fail(ErrorCode::BoundExceeded, "the probe is limited to q <= 10^4");
  Char3ProbeReport out;
  unsigned n = 1;
  for (std::uint64_t q = 3; q <= max_q; q *= 3, ++n) {
    const Field f = n == 1 ? FieldDesc::prime_field(3) : FieldDesc::extension_field(3, n);
    out.fields.push_back(exhaustive_exists(f, 4, OracleConstraint::product_fixed(f, 1)));
  }
  return out;
}

}  // namespace sumprod
