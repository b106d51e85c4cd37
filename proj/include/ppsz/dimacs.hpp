#pragma once

#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ppsz/cnf.hpp"
#include "ppsz/error.hpp"

namespace ppsz {

struct DimacsFile {
  CnfFormula formula;
  /// Comment lines with the leading "c" and one following space removed.
  std::vector<std::string> comments;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
std::optional<T> to_number(std::string_view tok) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Parses DIMACS CNF. Clauses may span lines; every clause must end in 0.
inline DimacsFile parse_dimacs_file(std::string_view text) {
  DimacsFile out;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  std::size_t num_vars = 0;
  std::vector<Literal> pending;
  std::size_t pending_line = 0;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    std::string_view body = detail::trim(line);
    if (body.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    if (body.front() == 'c') {
      std::string_view rest = body.substr(1);
      if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      out.comments.emplace_back(rest);
    } else if (body.front() == 'p') {
      if (have_header) throw ParseError(line_no, "duplicate problem line");
      auto toks = detail::split_ws(body);
      if (toks.size() != 4 || toks[0] != "p" || toks[1] != "cnf") {
        throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      auto n = detail::to_number<std::size_t>(toks[2]);
      auto m = detail::to_number<std::size_t>(toks[3]);
      if (!n || !m) throw ParseError(line_no, "malformed header counts");
      num_vars = *n;
      declared_clauses = *m;
      out.formula = CnfFormula(num_vars);
      have_header = true;
    } else if (body.front() == '%') {
      break;  // SATLIB trailer
    } else {
      if (!have_header) throw ParseError(line_no, "clause before 'p cnf' header");
      for (std::string_view tok : detail::split_ws(body)) {
        auto lit = detail::to_number<long long>(tok);
        if (!lit) throw ParseError(line_no, "invalid literal '" + std::string(tok) + "'");
        if (*lit == 0) {
          try {
            out.formula.add_clause(Clause(pending));
          } catch (const PreconditionError& e) {
            throw ParseError(pending_line ? pending_line : line_no, e.what());
          }
          pending.clear();
          pending_line = 0;
          continue;
        }
        const unsigned long long var = *lit < 0 ? static_cast<unsigned long long>(-*lit)
                                                : static_cast<unsigned long long>(*lit);
        if (var > num_vars) {
          throw ParseError(line_no, "literal " + std::string(tok) + " out of range (" +
                                        std::to_string(num_vars) + " variables)");
        }
        if (pending.empty()) pending_line = line_no;
        pending.push_back(Literal{static_cast<Var>(var), *lit < 0});
      }
    }
    if (eol == text.size()) break;
  }
  if (!have_header) throw ParseError(line_no, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(pending_line, "clause missing terminating 0");
  if (out.formula.num_clauses() != declared_clauses) {
    throw ParseError(line_no, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                  std::to_string(out.formula.num_clauses()));
  }
  return out;
}

inline CnfFormula parse_dimacs(std::string_view text) { return parse_dimacs_file(text).formula; }

inline std::string emit_dimacs(const CnfFormula& f, const std::vector<std::string>& comments = {}) {
  std::ostringstream os;
  for (const auto& c : comments) os << "c " << c << '\n';
  os << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const Clause& c : f.clauses()) {
    for (const Literal& l : c) os << l.to_dimacs() << ' ';
    os << "0\n";
  }
  return os.str();
}

/// Generator metadata carried in comment lines: "key=value" pairs plus the
/// variable maps "edge <var> = (<u>,<v>)" and "row <i> = <cols...>".
struct InstanceMetadata {
  std::map<std::string, std::string> values;
  /// var -> (u, v), 0-based vertices; index 0 unused.
  std::map<Var, std::pair<std::size_t, std::size_t>> edges;
  /// row index -> 1-based column (variable) indices.
  std::map<std::size_t, std::vector<Var>> rows;

  std::optional<std::string> get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
  }
};

inline InstanceMetadata parse_metadata(const std::vector<std::string>& comments) {
  InstanceMetadata meta;
  std::size_t idx = 0;
  for (const std::string& raw : comments) {
    ++idx;
    std::string_view line = detail::trim(raw);
    auto toks = detail::split_ws(line);
    if (toks.size() >= 3 && toks[0] == "edge" && toks[2] == "=") {
      auto var = detail::to_number<Var>(toks[1]);
      std::string_view pair = toks.size() > 3 ? toks[3] : std::string_view{};
      if (!var || pair.size() < 5 || pair.front() != '(' || pair.back() != ')') {
        throw ParseError(idx, "malformed edge comment '" + raw + "'");
      }
      pair = pair.substr(1, pair.size() - 2);
      auto comma = pair.find(',');
      if (comma == std::string_view::npos) throw ParseError(idx, "malformed edge comment '" + raw + "'");
      auto u = detail::to_number<std::size_t>(pair.substr(0, comma));
      auto v = detail::to_number<std::size_t>(pair.substr(comma + 1));
      if (!u || !v) throw ParseError(idx, "malformed edge comment '" + raw + "'");
      meta.edges[*var] = {*u, *v};
    } else if (toks.size() >= 3 && toks[0] == "row" && toks[2] == "=") {
      auto row = detail::to_number<std::size_t>(toks[1]);
      if (!row) throw ParseError(idx, "malformed row comment '" + raw + "'");
      std::vector<Var> cols;
      for (std::size_t t = 3; t < toks.size(); ++t) {
        auto c = detail::to_number<Var>(toks[t]);
        if (!c) throw ParseError(idx, "malformed row comment '" + raw + "'");
        cols.push_back(*c);
      }
      meta.rows[*row] = std::move(cols);
    } else {
      for (std::string_view tok : toks) {
        auto eq = tok.find('=');
        if (eq == std::string_view::npos || eq == 0) continue;
        meta.values[std::string(tok.substr(0, eq))] = std::string(tok.substr(eq + 1));
      }
    }
  }
  return meta;
}

}  // namespace ppsz
