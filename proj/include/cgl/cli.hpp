#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgl/arith.hpp"
#include "cgl/diagnostics.hpp"
#include "cgl/errors.hpp"
#include "cgl/explicit_formula.hpp"
#include "cgl/goldbach.hpp"
#include "cgl/lfunction.hpp"
#include "cgl/zero_catalog.hpp"

namespace cgl::cli {

enum ExitCode : int { ok = 0, failure = 1, usage = 2, coverage = 3, zero_scan = 4 };

inline constexpr int kSchemaVersion = 1;

/// Expands "2^a..2^b" to powers of two, or a comma list of integers and 2^e terms.
inline std::vector<std::uint64_t> parse_n_list(const std::string& text) {
  auto parse_one = [](std::string_view item) -> std::uint64_t {
    item = detail::trim(item);
    std::uint64_t value = 0;
    if (item.starts_with("2^")) {
      const auto e = detail::parse_field<unsigned>(item.substr(2), 1, 1);
      if (e > 62) throw InvalidArgument("exponent too large in '" + std::string(item) + "'");
      return std::uint64_t{1} << e;
    }
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw InvalidArgument("cannot parse N value '" + std::string(item) + "'");
    }
    return value;
  };
  std::vector<std::uint64_t> out;
  const std::string_view body = detail::trim(text);
  if (body.empty()) throw InvalidArgument("n-list is empty");
  if (const auto dots = body.find(".."); dots != std::string_view::npos) {
    const auto lo = detail::trim(body.substr(0, dots)), hi = detail::trim(body.substr(dots + 2));
    if (!lo.starts_with("2^") || !hi.starts_with("2^")) throw InvalidArgument("ranges must look like 2^a..2^b");
    const auto a = detail::parse_field<unsigned>(lo.substr(2), 1, 1), b = detail::parse_field<unsigned>(hi.substr(2), 1, 1);
    if (a > b || b > 62) throw InvalidArgument("invalid range '" + std::string(body) + "'");
    for (unsigned e = a; e <= b; ++e) out.push_back(std::uint64_t{1} << e);
    return out;
  }
  for (const auto item : detail::split(body, ',')) out.push_back(parse_one(item));
  return out;
}

struct RequestFlags {
  std::uint64_t n = 0;
  std::uint64_t q = 1;
  std::int64_t a = 1;
  std::int64_t b = 1;
  double k = 2.0;
  double gamma_max = 0.0;
  std::string zeros_file;
  std::string out;
};

inline std::string default_catalog_path() {
  const char* dir = std::getenv("CGL_ZEROS_DIR");
  if (dir == nullptr || *dir == '\0') return {};
  return (std::filesystem::path(dir) / "zeros.csv").string();
}

/// With an explicit file, coverage is strict. Otherwise the default catalog
/// (if present) is extended in memory to the requested height.
inline ZeroCatalog catalog_for(const RequestFlags& f, unsigned threads) {
  if (!f.zeros_file.empty()) return load_catalog(f.zeros_file);
  ZeroCatalog base;
  const std::string path = default_catalog_path();
  if (!path.empty() && std::filesystem::exists(path)) base = load_catalog(path);
  return f.gamma_max > 0.0 ? ensure(base, f.q, f.gamma_max, threads) : base;
}

inline void validate_request(const RequestFlags& f, std::uint64_t max_n) {
  WeightedAverageRequest{std::max<std::uint64_t>(f.n, 2), f.q, f.a, f.b, f.k}.validate();
  if (f.gamma_max < 0.0 || f.gamma_max > 1e3) throw InvalidArgument("gamma-max must lie in [0, 1000]");
  if (f.n > max_n) throw InvalidArgument("N = " + std::to_string(f.n) + " exceeds --max-n " + std::to_string(max_n));
}

inline nlohmann::ordered_json complex_json(complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline nlohmann::ordered_json number_json(double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); }

inline nlohmann::ordered_json report_json(const DiscrepancyReport& r, double runtime_ms) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["request"] = {{"n", r.request.N}, {"q", r.request.q}, {"a", r.request.a}, {"b", r.request.b}, {"k", r.request.k}};
  j["gamma_max"] = r.main.gamma_max;
  j["sigma"] = r.sigma;
  j["m1"] = r.main.m1;
  j["m2_a"] = complex_json(r.main.m2_a);
  j["m2_b"] = complex_json(r.main.m2_b);
  j["m3"] = complex_json(r.main.m3);
  j["imaginary_residue"] = r.main.imaginary_residue;
  j["discrepancy"] = r.discrepancy;
  j["g_q"] = r.g_q;
  j["normalized"] = r.normalized;
  j["tail_estimate"] = number_json(r.main.tail_estimate);
  j["runtime_ms"] = runtime_ms;
  return j;
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
  if (!file.flush()) throw Error("I/O failure writing '" + path + "'");
}

inline std::string format_g(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline void warn_small_k(double k, std::ostream& err) {
  if (k <= 1.0) err << "warning: k = " << k << " <= 1, the asymptotic error bound assumes k > 1\n";
}

inline int cmd_verify(const RequestFlags& f, unsigned threads, std::uint64_t max_n, std::ostream& out, std::ostream& err) {
  validate_request(f, max_n);
  warn_small_k(f.k, err);
  const auto start = std::chrono::steady_clock::now();
  const ZeroCatalog catalog = catalog_for(f, threads);
  const LambdaTable table(f.n);
  const auto reports = verify_sweep(f.q, f.a, f.b, f.k, {f.n}, catalog, f.gamma_max, table, threads);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  write_text(f.out, report_json(reports.front(), ms).dump(2) + "\n", out);
  return ok;
}

inline int cmd_sweep(const RequestFlags& f, const std::string& n_list, unsigned threads, std::uint64_t max_n, std::ostream& out,
                     std::ostream& err) {
  const auto ns = parse_n_list(n_list);
  for (const auto N : ns) validate_request(RequestFlags{N, f.q, f.a, f.b, f.k, f.gamma_max, {}, {}}, max_n);
  validate_request(RequestFlags{2, f.q, f.a, f.b, f.k, f.gamma_max, {}, {}}, max_n);
  warn_small_k(f.k, err);
  const ZeroCatalog catalog = catalog_for(f, threads);
  const LambdaTable table(*std::max_element(ns.begin(), ns.end()));
  const auto reports = verify_sweep(f.q, f.a, f.b, f.k, ns, catalog, f.gamma_max, table, threads);
  std::string csv = "N,sigma,m_total,discrepancy,normalized,tail_estimate\n";
  for (const auto& r : reports) {
    csv += std::to_string(r.request.N) + "," + format_g("%.17g", r.sigma) + "," + format_g("%.17g", r.main.total_real) + "," +
           format_g("%.17g", r.discrepancy) + "," + format_g("%.17g", r.normalized) + "," +
           format_g("%.17g", r.main.tail_estimate) + "\n";
  }
  write_text(f.out, csv, out);
  return ok;
}

inline int cmd_zeros(std::uint64_t q, double gamma_max, const std::string& out_path, const std::string& validate_path,
                     unsigned threads, std::ostream& out, std::ostream& err) {
  if (!validate_path.empty()) {
    try {
      const auto catalog = load_catalog(validate_path);
      std::size_t count = 0;
      for (const auto& [key, entry] : catalog.entries()) count += entry.zeros.size();
      out << validate_path << ": " << catalog.entries().size() << " characters, " << count << " zeros, valid\n";
      return ok;
    } catch (const ParseError& e) {
      err << validate_path << ": " << e.what() << "\n";
      return zero_scan;
    } catch (const ValidationError& e) {
      err << validate_path << ": " << e.what() << "\n";
      return zero_scan;
    }
  }
  if (q == 0) throw InvalidArgument("q must be positive");
  if (!(gamma_max > 0.0) || gamma_max > 1e3) throw InvalidArgument("gamma-max must lie in (0, 1000]");
  const std::string path = out_path.empty() ? default_catalog_path() : out_path;
  if (path.empty()) throw InvalidArgument("zeros needs --out or CGL_ZEROS_DIR");
  ZeroCatalog base;
  if (std::filesystem::exists(path)) base = load_catalog(path);
  try {
    const auto catalog = ensure(base, q, gamma_max, threads);
    save_catalog(catalog, path);
    out << "wrote " << catalog.entries().size() << " characters to " << path << "\n";
  } catch (const IncompleteScan& e) {
    err << "zero scan incomplete for character " << e.label() << ": " << e.what() << "\n";
    return zero_scan;
  }
  return ok;
}

inline int cmd_rg(const RequestFlags& f, std::uint64_t max_n, std::ostream& out) {
  if (f.q == 0) throw InvalidArgument("q must be positive");
  if (std::gcd(residue(f.a, f.q), f.q) != 1) throw InvalidArgument("a must be coprime to q");
  if (std::gcd(residue(f.b, f.q), f.q) != 1) throw InvalidArgument("b must be coprime to q");
  if (f.n > max_n) throw InvalidArgument("n exceeds --max-n");
  const LambdaTable table(std::max<std::uint64_t>(f.n, 1));
  out << format_g("%.12g", rg(f.n, f.q, f.a, f.b, table)) << "\n";
  return ok;
}

inline int cmd_linnik(const RequestFlags& f, std::size_t points, unsigned threads, std::ostream& out) {
  validate_request(f, std::uint64_t{1} << 24);
  const ZeroCatalog catalog = catalog_for(f, threads);
  const double x = 1.0 / static_cast<double>(f.n);
  const double eps = 1e-12;
  const LambdaTable table(detail::truncation_point(x, eps, std::numeric_limits<std::uint64_t>::max()));
  std::vector<EvalPoint> grid;
  std::vector<DiagnosticRow> rows;
  // Logarithmically spaced |y| from x/10 to 1/2, both signs and y = 0.
  grid.push_back({x, 0.0});
  for (std::size_t i = 0; i < points; ++i) {
    const double y = x / 10.0 * std::pow(5.0 / x, static_cast<double>(i) / std::max<double>(1.0, static_cast<double>(points - 1)));
    grid.push_back({x, y});
    grid.push_back({x, -y});
  }
  std::sort(grid.begin(), grid.end(), [](const EvalPoint& p, const EvalPoint& r) { return p.y < r.y; });
  const auto ratios = linnik_bound_ratio(f.q, f.a, f.n, grid, catalog, f.gamma_max, table, eps, threads);
  for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i].y, ratios[i]});
  std::ostringstream csv;
  write_diagnostic_csv(csv, rows);
  write_text(f.out, csv.str(), out);
  return ok;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Cesàro-weighted Goldbach averages in progressions and their explicit formula"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 1;
  std::uint64_t max_n = std::uint64_t{1} << 24;
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--max-n", max_n, "largest N accepted");

  RequestFlags f;
  std::string n_list, validate_path;
  std::size_t points = 64;

  auto add_request = [&](CLI::App* sub, bool need_n) {
    auto* n_opt = sub->add_option("--n", f.n, "N");
    if (need_n) n_opt->required();
    sub->add_option("--q", f.q, "modulus")->required();
    sub->add_option("--a", f.a, "residue of the first summand")->required();
    sub->add_option("--b", f.b, "residue of the second summand")->required();
  };

  auto* verify = app.add_subcommand("verify", "compare the Cesàro average with its explicit formula");
  add_request(verify, true);
  verify->add_option("--k", f.k, "Cesàro weight exponent")->required();
  verify->add_option("--gamma-max", f.gamma_max, "zero height cutoff")->required();
  verify->add_option("--zeros-file", f.zeros_file, "zero catalog CSV");
  verify->add_option("--out", f.out, "JSON report path");

  auto* sweep = app.add_subcommand("sweep", "run verify over a list of N and write CSV");
  sweep->add_option("--n-list", n_list, "2^a..2^b or comma list")->required();
  add_request(sweep, false);
  sweep->add_option("--k", f.k, "Cesàro weight exponent")->required();
  sweep->add_option("--gamma-max", f.gamma_max, "zero height cutoff")->required();
  sweep->add_option("--zeros-file", f.zeros_file, "zero catalog CSV");
  sweep->add_option("--out", f.out, "CSV path");

  auto* zeros = app.add_subcommand("zeros", "compute, extend or validate a zero catalog");
  zeros->add_option("--q", f.q, "modulus");
  zeros->add_option("--gamma-max", f.gamma_max, "zero height cutoff");
  zeros->add_option("--out", f.out, "catalog path");
  zeros->add_option("--validate", validate_path, "catalog to validate");

  auto* rg_cmd = app.add_subcommand("rg", "print R_G(n; q, a, b)");
  add_request(rg_cmd, true);

  auto* linnik = app.add_subcommand("linnik", "error-function bound ratios on the line x = 1/N as CSV");
  add_request(linnik, true);
  linnik->remove_option(linnik->get_option("--b"));
  linnik->add_option("--gamma-max", f.gamma_max, "zero height cutoff")->required();
  linnik->add_option("--points", points, "grid points per sign of y");
  linnik->add_option("--zeros-file", f.zeros_file, "zero catalog CSV");
  linnik->add_option("--out", f.out, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (verify->parsed()) return cmd_verify(f, threads, max_n, out, err);
    if (sweep->parsed()) return cmd_sweep(f, n_list, threads, max_n, out, err);
    if (zeros->parsed()) return cmd_zeros(zeros->count("--q") ? f.q : 0, f.gamma_max, f.out, validate_path, threads, out, err);
    if (rg_cmd->parsed()) return cmd_rg(f, max_n, out);
    if (linnik->parsed()) return cmd_linnik(f, points, threads, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const ParseError& e) {
    err << "error: zero catalog: " << e.what() << "\n";
    return usage;
  } catch (const ValidationError& e) {
    err << "error: zero catalog: " << e.what() << "\n";
    return usage;
  } catch (const CoverageError& e) {
    err << "error: " << e.what() << "\n";
    return coverage;
  } catch (const TableTooSmall& e) {
    err << "error: " << e.what() << "\n";
    return coverage;
  } catch (const IncompleteScan& e) {
    err << "error: zero scan incomplete for character " << e.label() << ": " << e.what() << "\n";
    return zero_scan;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
  return usage;
}

}  // namespace cgl::cli
