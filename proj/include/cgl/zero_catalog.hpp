#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cgl/characters.hpp"
#include "cgl/errors.hpp"
#include "cgl/lfunction.hpp"
#include "cgl/numeric.hpp"

namespace cgl {

struct CharacterKey {
  std::uint64_t modulus = 1;
  std::uint64_t label = 1;

  auto operator<=>(const CharacterKey&) const = default;
  std::string str() const { return std::to_string(modulus) + "." + std::to_string(label); }
};

inline CharacterKey key_of(const Character& chi) { return {chi.modulus(), chi.label()}; }

/// Parses "q.label"; throws InvalidArgument on malformed text.
inline CharacterKey parse_character_key(std::string_view text) {
  const auto dot = text.find('.');
  CharacterKey key;
  if (dot == std::string_view::npos) throw InvalidArgument("character key must look like q.label: " + std::string(text));
  const auto q_part = text.substr(0, dot), l_part = text.substr(dot + 1);
  auto r1 = std::from_chars(q_part.data(), q_part.data() + q_part.size(), key.modulus);
  auto r2 = std::from_chars(l_part.data(), l_part.data() + l_part.size(), key.label);
  if (r1.ec != std::errc() || r1.ptr != q_part.data() + q_part.size() || r2.ec != std::errc() ||
      r2.ptr != l_part.data() + l_part.size() || key.modulus == 0) {
    throw InvalidArgument("character key must look like q.label: " + std::string(text));
  }
  return key;
}

/// Zeros of one primitive L-function, complete for |γ| <= gamma_max.
/// Real characters keep γ >= 0 only (mirrored at use); complex ones keep the
/// full signed list. A real zero is stored with γ = 0.
struct CatalogEntry {
  std::vector<Zero> zeros;
  double gamma_max = 0.0;
  Zero::Source source = Zero::Source::computed;
  bool real_character = true;
};

/// Immutable-after-construction map (modulus, Conrey label) -> sorted zeros.
class ZeroCatalog {
 public:
  using Entries = std::map<CharacterKey, CatalogEntry>;

  const Entries& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  const CatalogEntry* find(const CharacterKey& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool covers(const CharacterKey& key, double gamma_max) const {
    const auto* entry = find(key);
    return entry != nullptr && entry->gamma_max >= gamma_max;
  }

  /// Inserts or replaces an entry after validating it; `line` tags errors.
  void put(const CharacterKey& key, CatalogEntry entry, std::size_t line = 0) {
    validate_key(key, entry, line);
    validate_order(key, entry, line);
    entries_[key] = std::move(entry);
  }

  /// Union of two catalogs; on a shared key the entry with the larger
  /// gamma_max wins (this catalog on ties).
  ZeroCatalog merged(const ZeroCatalog& other) const {
    ZeroCatalog out = *this;
    for (const auto& [key, entry] : other.entries_) {
      const auto it = out.entries_.find(key);
      if (it == out.entries_.end() || it->second.gamma_max < entry.gamma_max) out.entries_[key] = entry;
    }
    return out;
  }

  static void validate_key(const CharacterKey& key, CatalogEntry& entry, std::size_t line) {
    if (key.modulus == 0 || key.label == 0 || key.label > key.modulus || std::gcd(key.label % key.modulus, key.modulus) != 1) {
      throw ValidationError("invalid character " + key.str(), line);
    }
    const Character chi(key.modulus, key.label);
    if (!is_primitive(chi)) {
      throw ValidationError("character " + key.str() + " is not primitive (conductor " +
                                std::to_string(conductor(chi).conductor) + ")",
                            line);
    }
    entry.real_character = chi.is_real();
  }

  static void validate_order(const CharacterKey& key, const CatalogEntry& entry, std::size_t line) {
    for (std::size_t i = 0; i < entry.zeros.size(); ++i) {
      const auto& z = entry.zeros[i];
      if (!(z.beta > 0.0 && z.beta < 1.0)) throw ValidationError("beta outside (0, 1) for " + key.str(), line);
      if (entry.real_character && z.gamma < 0.0) {
        throw ValidationError("negative gamma stored for real character " + key.str(), line);
      }
      if (i > 0) {
        const double prev = entry.zeros[i - 1].gamma;
        if (std::abs(z.gamma - prev) <= 1e-9) throw ValidationError("duplicate zero for " + key.str(), line);
        if (z.gamma < prev) throw ValidationError("zeros not sorted by gamma for " + key.str(), line);
      }
    }
  }

 private:
  Entries entries_;
};

namespace detail {

/// Shortest decimal with at least 12 significant digits that reads back to v.
inline std::string format_decimal(double v) {
  char buf[64];
  for (int digits = 12; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%#.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line, std::size_t column) {
  field = trim(field);
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError("cannot parse '" + std::string(field) + "'", line, column);
  }
  return value;
}

}  // namespace detail

inline constexpr std::string_view kCatalogHeader = "modulus,conrey_label,beta,gamma";

/// Reads the CSV catalog format:
///
///   modulus,conrey_label,beta,gamma
///   #gamma_max=<T>,modulus=<q>,conrey_label=<n>,source=<computed|loaded>
///   <q>,<n>,<beta>,<gamma>
///
/// A bare `#gamma_max=<T>` applies to the entry of the rows that follow it.
/// Entries without completeness metadata are taken as complete up to their
/// largest |γ|; rows without a source tag are "loaded".
inline ZeroCatalog read_catalog(std::istream& in) {
  struct Pending {
    CatalogEntry entry;
    std::size_t first_line = 0;
    bool has_gamma_max = false;
    bool has_source = false;
  };
  std::map<CharacterKey, Pending> pending;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  double floating_gamma_max = -1.0;

  auto meta_for = [&](const CharacterKey& key, std::size_t line) -> Pending& {
    auto& p = pending[key];
    if (p.first_line == 0) {
      p.first_line = line;
      p.entry.source = Zero::Source::loaded;
    }
    return p;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCatalogHeader) throw ParseError("expected header '" + std::string(kCatalogHeader) + "'", line_no, 1);
      header_seen = true;
      continue;
    }
    if (line.front() == '#') {
      const auto body = line.substr(1);
      if (!body.starts_with("gamma_max=")) continue;
      const auto parts = detail::split(body, ',');
      double gamma_max = 0.0;
      std::optional<std::uint64_t> q, n;
      std::optional<Zero::Source> source;
      for (std::size_t c = 0; c < parts.size(); ++c) {
        const auto part = detail::trim(parts[c]);
        const auto eq = part.find('=');
        if (eq == std::string_view::npos) throw ParseError("malformed metadata '" + std::string(part) + "'", line_no, c + 1);
        const auto name = part.substr(0, eq), value = part.substr(eq + 1);
        if (name == "gamma_max") {
          gamma_max = detail::parse_field<double>(value, line_no, c + 1);
        } else if (name == "modulus") {
          q = detail::parse_field<std::uint64_t>(value, line_no, c + 1);
        } else if (name == "conrey_label") {
          n = detail::parse_field<std::uint64_t>(value, line_no, c + 1);
        } else if (name == "source") {
          if (value == "computed") {
            source = Zero::Source::computed;
          } else if (value == "loaded") {
            source = Zero::Source::loaded;
          } else {
            throw ParseError("unknown source '" + std::string(value) + "'", line_no, c + 1);
          }
        } else {
          throw ParseError("unknown metadata field '" + std::string(name) + "'", line_no, c + 1);
        }
      }
      if (!(gamma_max >= 0.0) || !std::isfinite(gamma_max)) throw ParseError("gamma_max must be a nonnegative number", line_no, 1);
      if (q.has_value() != n.has_value()) throw ParseError("metadata needs both modulus and conrey_label", line_no, 1);
      if (q) {
        auto& p = meta_for({*q, *n}, line_no);
        p.entry.gamma_max = gamma_max;
        p.has_gamma_max = true;
        if (source) {
          p.entry.source = *source;
          p.has_source = true;
        }
        floating_gamma_max = -1.0;
      } else {
        floating_gamma_max = gamma_max;
      }
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 4) throw ParseError("expected 4 fields, found " + std::to_string(fields.size()), line_no, std::min<std::size_t>(fields.size(), 4) + 1);
    const CharacterKey key{detail::parse_field<std::uint64_t>(fields[0], line_no, 1),
                           detail::parse_field<std::uint64_t>(fields[1], line_no, 2)};
    Zero z;
    z.beta = detail::parse_field<double>(fields[2], line_no, 3);
    z.gamma = detail::parse_field<double>(fields[3], line_no, 4);
    if (!std::isfinite(z.beta) || !std::isfinite(z.gamma)) throw ParseError("non-finite value", line_no, 3);
    z.modulus = key.modulus;
    z.conrey_label = key.label;
    auto& p = meta_for(key, line_no);
    if (floating_gamma_max >= 0.0) {
      p.entry.gamma_max = floating_gamma_max;
      p.has_gamma_max = true;
      floating_gamma_max = -1.0;
    }
    if (p.entry.zeros.empty()) {
      CatalogEntry probe;
      ZeroCatalog::validate_key(key, probe, line_no);
      p.entry.real_character = probe.real_character;
    }
    p.entry.zeros.push_back(z);
    CatalogEntry window;
    window.real_character = p.entry.real_character;
    const auto n = p.entry.zeros.size();
    window.zeros.assign(p.entry.zeros.begin() + static_cast<std::ptrdiff_t>(n >= 2 ? n - 2 : 0), p.entry.zeros.end());
    ZeroCatalog::validate_order(key, window, line_no);
  }
  if (!header_seen) throw ParseError("missing header", line_no + 1, 1);

  ZeroCatalog catalog;
  for (auto& [key, p] : pending) {
    double largest = 0.0;
    for (auto& z : p.entry.zeros) {
      z.source = p.entry.source;
      largest = std::max(largest, std::abs(z.gamma));
    }
    if (!p.has_gamma_max) p.entry.gamma_max = largest;
    if (p.entry.gamma_max < largest) {
      throw ValidationError("gamma_max below largest stored zero for " + key.str(), p.first_line);
    }
    catalog.put(key, std::move(p.entry), p.first_line);
  }
  return catalog;
}

inline ZeroCatalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open zero catalog '" + path + "'");
  return read_catalog(in);
}

inline void write_catalog(const ZeroCatalog& catalog, std::ostream& out) {
  out << kCatalogHeader << '\n';
  for (const auto& [key, entry] : catalog.entries()) {
    out << "#gamma_max=" << detail::format_decimal(entry.gamma_max) << ",modulus=" << key.modulus
        << ",conrey_label=" << key.label << ",source=" << (entry.source == Zero::Source::computed ? "computed" : "loaded")
        << '\n';
    for (const auto& z : entry.zeros) {
      out << key.modulus << ',' << key.label << ',' << detail::format_decimal(z.beta) << ','
          << detail::format_decimal(z.gamma) << '\n';
    }
  }
}

inline void save_catalog(const ZeroCatalog& catalog, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write zero catalog '" + path + "'");
  write_catalog(catalog, out);
  out.flush();
  if (!out) throw Error("I/O failure writing zero catalog '" + path + "'");
}

/// Primitive characters χ* for χ mod q, one per character, in label order of χ.
inline std::vector<CharacterKey> primitive_keys(std::uint64_t q) {
  std::vector<CharacterKey> out;
  for (const auto& chi : character_group(q)) out.push_back(key_of(conductor(chi).primitive));
  return out;
}

/// Returns a catalog covering (0, gamma_max] for the primitive character of
/// every χ mod q. Existing entries are kept; missing coverage is computed with
/// find_zeros, extending entries above their old gamma_max.
inline ZeroCatalog ensure(const ZeroCatalog& catalog, std::uint64_t q, double gamma_max, unsigned threads = 1,
                          double tol = 1e-10) {
  if (q == 0) throw InvalidArgument("ensure: modulus must be positive");
  if (gamma_max > 1e3) throw InvalidArgument("ensure: gamma_max must not exceed 1000");
  std::vector<CharacterKey> todo;
  for (const auto& key : primitive_keys(q)) {
    if (!catalog.covers(key, gamma_max) && std::find(todo.begin(), todo.end(), key) == todo.end()) todo.push_back(key);
  }
  std::vector<std::vector<Zero>> computed(todo.size());
  parallel_for(todo.size(), threads, [&](std::size_t i) {
    computed[i] = find_zeros(Character(todo[i].modulus, todo[i].label), gamma_max, tol);
  });
  ZeroCatalog out = catalog;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    CatalogEntry entry;
    entry.gamma_max = std::max(gamma_max, 0.0);
    entry.source = Zero::Source::computed;
    if (const auto* old = catalog.find(todo[i])) {
      entry.source = old->source;
      entry.zeros = old->zeros;
      for (const auto& z : computed[i]) {
        if (std::abs(z.gamma) > old->gamma_max) entry.zeros.push_back(z);
      }
      std::sort(entry.zeros.begin(), entry.zeros.end(), [](const Zero& a, const Zero& b) { return a.gamma < b.gamma; });
    } else {
      entry.zeros = std::move(computed[i]);
    }
    out.put(todo[i], std::move(entry));
  }
  return out;
}

}  // namespace cgl
