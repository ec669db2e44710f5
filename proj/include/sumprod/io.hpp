#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sumprod/decomposer.hpp"
#include "sumprod/families.hpp"
#include "sumprod/oracle.hpp"

namespace sumprod {

using Json = nlohmann::ordered_json;

inline Json elements_json(const std::vector<Elem>& xs) {
  Json arr = Json::array();
  for (const auto& e : xs) arr.push_back(e.str());
  return arr;
}

inline Json constraint_json(const Task& t) {
  return std::visit(
      [](const auto& c) -> Json {
        using C = std::decay_t<decltype(c)>;
        Json j;
        if constexpr (std::is_same_v<C, SumFixed>) {
          j["kind"] = "sum";
          j["alpha"] = c.alpha.str();
        } else if constexpr (std::is_same_v<C, ProductFixed>) {
          j["kind"] = "product";
          j["m"] = c.m;
        } else if constexpr (std::is_same_v<C, Both>) {
          j["kind"] = "both";
        } else if constexpr (std::is_same_v<C, OddSigned>) {
          j["kind"] = "odd";
          j["sqrt_minus_one"] = c.use_sqrt_minus_one;
        } else {
          j["kind"] = "sum-product";
          j["sum"] = c.sum.str();
          j["product"] = c.product.str();
        }
        return j;
      },
      t.constraint);
}

/// {"field", "x", "k", "constraint", "elements", "route", "verified"}; key
/// order is fixed so identical witnesses serialize byte-identically.
inline Json witness_json(const Witness& w) {
  Json j;
  j["field"] = w.task().field()->spec();
  j["x"] = w.task().x.str();
  j["k"] = w.task().k;
  j["constraint"] = constraint_json(w.task());
  j["elements"] = elements_json(w.elements());
  j["route"] = w.route();
  j["verified"] = verify(w.elements(), expected_sum(w.task()), expected_product(w.task()));
  return j;
}

inline std::string witness_text(const Witness& w) {
  std::ostringstream os;
  os << w.task().field()->spec() << " x=" << w.task().x << " k=" << w.task().k << ": (";
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? ", " : "") << w.elements()[i];
  os << ") sum=" << sum_of(w.elements(), w.task().field()) << " product=" << product_of(w.elements(), w.task().field())
     << " route=" << w.route();
  return os.str();
}

// ---- scan reports ---------------------------------------------------------

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string witness_cell(const std::vector<Elem>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += xs[i].str();
  }
  return out;
}

inline constexpr const char* kScanCsvHeader = "q,k,constraint,x,exists,witness";

inline std::string scan_csv_row(const Field& f, int k, const std::string& constraint, const ScanRecord& r) {
  return std::to_string(f->order()) + "," + std::to_string(k) + "," + csv_cell(constraint) + "," + csv_cell(r.x.str()) +
         "," + (r.exists ? "true" : "false") + "," + csv_cell(witness_cell(r.witness));
}

inline Json scan_record_json(const Field& f, int k, const std::string& constraint, const ScanRecord& r) {
  Json j;
  j["q"] = f->order();
  j["k"] = k;
  j["constraint"] = constraint;
  j["x"] = r.x.str();
  j["exists"] = r.exists;
  j["witness"] = r.exists ? elements_json(r.witness) : Json::array();
  return j;
}

inline Json scan_report_json(const ScanReport& r) {
  Json j;
  j["field"] = r.field->spec();
  j["q"] = r.field->order();
  j["k"] = r.k;
  j["constraint"] = r.constraint.label;
  Json recs = Json::array();
  for (const auto& rec : r.records) recs.push_back(scan_record_json(r.field, r.k, r.constraint.label, rec));
  j["records"] = std::move(recs);
  j["summary"] = {{"total", r.records.size()}, {"exists", r.count_exists()}, {"missing", elements_json(r.missing())}};
  return j;
}

inline void write_scan_csv(std::ostream& os, const ScanReport& r, bool header = true) {
  if (header) os << kScanCsvHeader << '\n';
  for (const auto& rec : r.records) os << scan_csv_row(r.field, r.k, r.constraint.label, rec) << '\n';
}

// ---- identities report ----------------------------------------------------

inline std::string primes_text(const std::set<std::uint64_t>& ps) {
  std::string out = "{";
  bool first = true;
  for (auto p : ps) {
    out += (first ? "" : ",") + std::to_string(p);
    first = false;
  }
  return out + "}";
}

/// One line per family: name, verdict, bad primes, excluded locus and, on
/// failure, the nonzero residuals.
inline std::string identities_line(const Family& f) {
  std::string line = f.name + " " + std::string(to_string(f.verdict)) + " bad_primes=" + primes_text(f.bad_primes) +
                     " excluded=[";
  for (std::size_t i = 0; i < f.excluded_locus.size(); ++i) line += (i ? "; " : "") + f.excluded_locus[i].str();
  line += "]";
  if (f.verdict != Verdict::Verified) {
    if (!f.sum_residual.is_zero()) line += " sum_residual=" + f.sum_residual.str();
    if (!f.product_residual.is_zero()) line += " product_residual=" + f.product_residual.str();
  }
  return line;
}

inline Json identities_json(const Catalog& catalog) {
  Json arr = Json::array();
  for (const auto& f : catalog.families()) {
    Json j;
    j["name"] = f.name;
    j["variables"] = f.variables;
    j["constraint"] = f.constraint_text();
    j["verdict"] = std::string(to_string(f.verdict));
    j["bad_primes"] = f.bad_primes;
    Json locus = Json::array();
    for (const auto& d : f.excluded_locus) locus.push_back(d.str());
    j["excluded_locus"] = std::move(locus);
    j["sum_residual"] = f.sum_residual.is_zero() ? Json(nullptr) : Json(f.sum_residual.str());
    j["product_residual"] = f.product_residual.is_zero() ? Json(nullptr) : Json(f.product_residual.str());
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace sumprod
