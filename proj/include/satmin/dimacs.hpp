#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>

#include "satmin/cnf.hpp"

namespace satmin {

class DimacsParseError : public std::runtime_error {
public:
  DimacsParseError(const std::string& msg, int line)
      : std::runtime_error("dimacs parse error, line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// Parses DIMACS CNF: comment lines `c ...`, one `p cnf N M` header, clauses as
// 0-terminated literal lists in free layout. A `%` line ends the input (SATLIB
// convention). Duplicate literals inside a clause are dropped by the Clause
// constructor.
inline Cnf parse_dimacs(std::istream& in) {
  int line_no = 0;
  bool have_header = false;
  int declared_vars = 0;
  int declared_clauses = 0;
  std::vector<Literal> pending;
  Cnf cnf;

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line
    if (tok == "c" || tok[0] == 'c') continue;
    if (tok == "%" || tok[0] == '%') break;
    if (tok == "p") {
      if (have_header) throw DimacsParseError("duplicate header", line_no);
      std::string fmt;
      if (!(ls >> fmt) || fmt != "cnf")
        throw DimacsParseError("expected 'p cnf N M'", line_no);
      if (!(ls >> declared_vars >> declared_clauses) || declared_vars < 0 ||
          declared_clauses < 0)
        throw DimacsParseError("malformed 'p cnf' header", line_no);
      have_header = true;
      cnf.num_vars = declared_vars;
      cnf.clauses.reserve(static_cast<std::size_t>(declared_clauses));
      continue;
    }
    if (!have_header)
      throw DimacsParseError("clause data before 'p cnf' header", line_no);
    // Literal tokens; the first token was already consumed.
    std::istringstream rest(line);
    int value;
    while (rest >> value) {
      if (value == 0) {
        cnf.clauses.push_back(Clause(std::move(pending)));
        pending.clear();
        continue;
      }
      int var = value > 0 ? value : -value;
      if (var > declared_vars)
        throw DimacsParseError("literal " + std::to_string(value) + " exceeds declared " +
                                   std::to_string(declared_vars) + " variables",
                               line_no);
      pending.push_back(Literal::from_dimacs(value));
    }
    if (!rest.eof())
      throw DimacsParseError("unexpected token in clause data", line_no);
  }

  if (!have_header) throw DimacsParseError("missing 'p cnf' header", line_no);
  if (!pending.empty())
    throw DimacsParseError("unterminated clause (no closing 0)", line_no);
  if (cnf.num_clauses() != declared_clauses)
    throw DimacsParseError("clause count mismatch: header declares " +
                               std::to_string(declared_clauses) + ", found " +
                               std::to_string(cnf.num_clauses()),
                           line_no);
  return cnf;
}

inline Cnf parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

inline Cnf read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open DIMACS file: " + path);
  return parse_dimacs(in);
}

inline void emit_dimacs(const Cnf& cnf, std::ostream& out) {
  out << "p cnf " << cnf.num_vars << ' ' << cnf.num_clauses() << '\n';
  for (const Clause& c : cnf.clauses) {
    for (const Literal& l : c.literals()) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
}

inline std::string emit_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  emit_dimacs(cnf, out);
  return out.str();
}

inline void write_dimacs_file(const Cnf& cnf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write DIMACS file: " + path);
  emit_dimacs(cnf, out);
}

}  // namespace satmin
