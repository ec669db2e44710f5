#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sumprod/sumprod.hpp"

namespace sumprod::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Splits an element list. ';' always separates; ',' separates unless the
/// field is an extension field (whose elements contain commas).
inline std::vector<Elem> parse_elements(const Field& f, const std::string& text) {
  const char sep = text.find(';') != std::string::npos || f->kind() == FieldKind::ExtensionField ? ';' : ',';
  std::vector<Elem> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    std::string item = text.substr(start, pos == std::string::npos ? pos : pos - start);
    if (item.empty()) fail(ErrorCode::ParseError, "empty element in '" + text + "'");
    out.push_back(parse_elem(f, item));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

inline void print_witness(std::ostream& out, const Witness& w, const std::string& format) {
  if (format == "json") {
    out << witness_json(w).dump() << '\n';
  } else if (format == "csv") {
    out << "field,x,k,constraint,elements,route,verified\n"
        << csv_cell(w.task().field()->spec()) << ',' << csv_cell(w.task().x.str()) << ',' << w.task().k << ','
        << csv_cell(constraint_json(w.task()).dump()) << ',' << csv_cell(witness_cell(w.elements())) << ','
        << csv_cell(w.route()) << ",true\n";
  } else {
    out << witness_text(w) << '\n';
  }
}

inline const char* kHelpFooter =
    "Negative values must be attached with '=' (for example --x=-1) or quoted.\n"
    "Fields: Q, Fp:<p>, Fq:<p>^<n>. Extension-field elements are written c0,c1,...\n"
    "and separated by ';' in --elements.";

/// Runs the command line. Exit status 0 on success, 1 on domain errors,
/// 2 on usage errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restricted sum/product decompositions in fields", "sumprod"};
  app.footer(kHelpFooter);
  app.require_subcommand(1);

  std::string field_spec = "Q";
  std::string x_text;
  std::optional<int> k;
  std::optional<std::string> sum_text;
  std::optional<int> product_m;
  std::optional<std::string> product_text;
  bool both_flag = false;
  bool sqrt_flag = false;
  std::string elements_text;
  std::string format = "json";
  std::string constraint_text;
  std::string out_path;
  std::uint32_t max_prime = 50;
  std::uint64_t max_q = 27;

  auto format_opt = [&](CLI::App* sc, std::vector<std::string> allowed) {
    sc->add_option("--format", format, "Output format")->check(CLI::IsMember(allowed));
  };

  auto* decompose = app.add_subcommand("decompose", "Find a witness for a prescribed sum or product");
  decompose->add_option("--field", field_spec, "Field")->required();
  decompose->add_option("--x", x_text, "Target element")->required();
  decompose->add_option("--k", k, "Number of elements")->required();
  decompose->add_option("--sum", sum_text, "Prescribed sum alpha (product becomes x)");
  decompose->add_option("--product", product_m, "Prescribed product, 1 or -1 (sum becomes x)");
  decompose->add_flag("--both", both_flag, "Sum and product both equal x");
  format_opt(decompose, {"json", "csv", "text"});

  auto* both = app.add_subcommand("both", "Witness with sum = product = x (even k >= 4)");
  both->add_option("--field", field_spec, "Field")->required();
  both->add_option("--x", x_text, "Target element")->required();
  both->add_option("--k", k, "Number of elements")->required();
  format_opt(both, {"json", "csv", "text"});

  auto* odd = app.add_subcommand("odd", "Odd-length witness (x, 1, -1, ...)");
  odd->add_option("--field", field_spec, "Field")->required();
  odd->add_option("--x", x_text, "Target element")->required();
  odd->add_option("--k", k, "Number of elements (odd)")->required();
  odd->add_flag("--sqrt-minus-one", sqrt_flag, "Use (i, -i) with i^2 = -1 as the first pair");
  format_opt(odd, {"json", "csv", "text"});

  auto* verify_cmd = app.add_subcommand("verify", "Recompute the sum and product of a tuple");
  verify_cmd->add_option("--field", field_spec, "Field")->required();
  verify_cmd->add_option("--elements", elements_text, "Comma- or semicolon-separated elements")->required();
  verify_cmd->add_option("--sum", sum_text, "Expected sum");
  verify_cmd->add_option("--product", product_text, "Expected product");
  format_opt(verify_cmd, {"json", "text"});

  auto* identities = app.add_subcommand("identities", "Certify every parametrization family");
  format_opt(identities, {"json", "text"});

  auto* scan = app.add_subcommand("scan", "Exhaustive existence table over a finite field");
  scan->add_option("--field", field_spec, "Finite field")->required();
  scan->add_option("--k", k, "Tuple length (4 or 5)")->required();
  scan->add_option("--constraint", constraint_text, "sum:<alpha> | product:<m> | both | conjecture")->required();
  scan->add_option("--out", out_path, "Stream CSV records to this file");
  format_opt(scan, {"json", "csv"});

  auto* conjecture = app.add_subcommand("conjecture", "Scan a+b+c+d-1 = x = abcd over GF(p), 5 <= p <= max");
  conjecture->add_option("--max-prime", max_prime, "Largest prime to scan");
  format_opt(conjecture, {"json", "csv", "text"});

  auto* probe = app.add_subcommand("char3probe", "Sum x, product 1 over F_3, F_9, ... up to max q");
  probe->add_option("--max-q", max_q, "Largest field order");
  format_opt(probe, {"json", "text"});

  std::vector<const char*> argv{"sumprod"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*decompose) {
      const int given = (sum_text ? 1 : 0) + (product_m ? 1 : 0) + (both_flag ? 1 : 0);
      if (given != 1) throw UsageError("exactly one of --sum, --product, --both is required");
      if (product_m && *product_m != 1 && *product_m != -1) {
        throw UsageError("--product must be 1 or -1, got " + std::to_string(*product_m));
      }
      const Field f = make_field(field_spec);
      const Elem x = parse_elem(f, x_text);
      if (sum_text) {
        print_witness(out, decompose_product_constrained(x, *k, parse_elem(f, *sum_text)), format);
      } else if (product_m) {
        print_witness(out, decompose_sum_constrained(x, *k, *product_m), format);
      } else {
        print_witness(out, decompose_both(x, *k), format);
      }
      return kExitOk;
    }
    if (*both) {
      const Field f = make_field(field_spec);
      print_witness(out, decompose_both(parse_elem(f, x_text), *k), format);
      return kExitOk;
    }
    if (*odd) {
      const Field f = make_field(field_spec);
      print_witness(out, decompose_odd_signed(parse_elem(f, x_text), *k, sqrt_flag), format);
      return kExitOk;
    }
    if (*verify_cmd) {
      if (!sum_text && !product_text) throw UsageError("verify needs --sum and/or --product");
      const Field f = make_field(field_spec);
      const auto elems = parse_elements(f, elements_text);
      std::optional<Elem> exp_sum;
      std::optional<Elem> exp_product;
      if (sum_text) exp_sum = parse_elem(f, *sum_text);
      if (product_text) exp_product = parse_elem(f, *product_text);
      const bool ok = verify(elems, exp_sum, exp_product);
      if (format == "json") {
        Json j;
        j["field"] = f->spec();
        j["elements"] = elements_json(elems);
        j["sum"] = sum_of(elems, f).str();
        j["product"] = product_of(elems, f).str();
        j["expected_sum"] = exp_sum ? Json(exp_sum->str()) : Json(nullptr);
        j["expected_product"] = exp_product ? Json(exp_product->str()) : Json(nullptr);
        j["verified"] = ok;
        out << j.dump() << '\n';
      } else {
        out << "verified=" << (ok ? "true" : "false") << " sum=" << sum_of(elems, f) << " product=" << product_of(elems, f)
            << '\n';
      }
      return ok ? kExitOk : kExitDomain;
    }
    if (*identities) {
      const Catalog& catalog = Catalog::instance();
      if (format == "json") {
        out << identities_json(catalog).dump(2) << '\n';
      } else {
        for (const auto& fam : catalog.families()) out << identities_line(fam) << '\n';
      }
      return kExitOk;
    }
    if (*scan) {
      const Field f = make_field(field_spec);
      OracleConstraint c{};
      if (constraint_text == "both") {
        c = OracleConstraint::both(f);
      } else if (constraint_text == "conjecture") {
        c = OracleConstraint::conjecture(f);
      } else if (constraint_text.starts_with("sum:")) {
        const Elem alpha = parse_elem(f, constraint_text.substr(4));
        c = OracleConstraint::sum_fixed(alpha);
      } else if (constraint_text.starts_with("product:")) {
        const int m = std::stoi(constraint_text.substr(8));
        if (m != 1 && m != -1) throw UsageError("--constraint product:<m> needs m = 1 or -1");
        c = OracleConstraint::product_fixed(f, m);
      } else {
        throw UsageError("unknown --constraint '" + constraint_text + "'");
      }
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw UsageError("cannot open --out " + out_path);
        file << kScanCsvHeader << '\n' << std::flush;
      }
      if (format == "csv") out << kScanCsvHeader << '\n';
      const int kk = *k;
      auto report = exhaustive_exists(f, kk, c, [&](const ScanRecord& r) {
        const std::string row = scan_csv_row(f, kk, c.label, r);
        if (file.is_open()) file << row << '\n' << std::flush;
        if (format == "csv") out << row << '\n' << std::flush;
      });
      if (format == "json") out << scan_report_json(report).dump() << '\n';
      return kExitOk;
    }
    if (*conjecture) {
      if (format == "csv") out << kScanCsvHeader << '\n';
      auto report = conjecture_scan(max_prime, [&](const Field& f, const ScanRecord& r) {
        if (format == "csv") out << scan_csv_row(f, 4, "sum-1=x product=x", r) << '\n';
      });
      if (format == "json") {
        Json j;
        j["max_prime"] = max_prime;
        Json fields = Json::array();
        for (const auto& r : report.fields) {
          fields.push_back({{"p", r.field->characteristic()}, {"total", r.records.size()}, {"exists", r.count_exists()}});
        }
        j["fields"] = std::move(fields);
        Json ce = Json::array();
        for (const auto& [p, x] : report.counterexamples) ce.push_back({{"p", p}, {"x", x.str()}});
        j["counterexamples"] = std::move(ce);
        j["holds"] = report.holds();
        out << j.dump() << '\n';
      } else if (format == "text") {
        for (const auto& r : report.fields) {
          out << r.field->spec() << ": " << r.count_exists() << "/" << r.records.size() << " x have a witness\n";
        }
        out << (report.holds() ? "no counterexample found" : "COUNTEREXAMPLES FOUND") << '\n';
      }
      return kExitOk;
    }
    if (*probe) {
      auto report = char3_probe(max_q);
      if (format == "json") {
        Json j;
        Json fields = Json::array();
        for (const auto& r : report.fields) {
          fields.push_back({{"field", r.field->spec()},
                            {"q", r.field->order()},
                            {"total", r.records.size()},
                            {"exists", r.count_exists()},
                            {"missing", elements_json(r.missing())}});
        }
        j["fields"] = std::move(fields);
        j["supports_guess"] = report.supports_guess();
        out << j.dump() << '\n';
      } else {
        for (const auto& r : report.fields) {
          out << r.field->spec() << ": " << r.count_exists() << "/" << r.records.size()
              << " x are sums of four elements with product 1\n";
        }
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    Json j;
    j["error"] = std::string(to_string(e.code()));
    j["message"] = e.what();
    if (format == "json") {
      out << j.dump() << '\n';
    }
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace sumprod::cli
