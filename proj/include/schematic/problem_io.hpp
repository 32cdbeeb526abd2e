#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "schematic/oracle.hpp"
#include "schematic/solver.hpp"

namespace schematic {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) +
                           ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_, col_;
};

struct ParsedProblem {
  SchematicProblem problem;
  std::vector<std::pair<std::string, std::string>> directives;

  std::optional<std::string> directive(const std::string& key) const;
};

// Grammar:
//   file  := "schema:" rule+ "problem:" eq+ directive*
//   rule  := SYM "[i]" "->" term ";"      rhs variables SYM[i] or SYM[i+c]
//   eq    := term "=" term ";"            variables SYM[n]
//   directive := "#" key "=" value        (other "#" lines are comments)
// Rejects schemas that are not uniform or are mutually recursive unless
// require_uniform is false.
ParsedProblem parse_problem(std::string_view text, bool require_uniform = true);
Term parse_term(std::string_view text);  // problem-side term
Equation parse_equation(std::string_view text);

std::string print_rule_term(const Term& base);  // X[3] printed as X[i+3]
std::string print_problem(const SchematicProblem& p,
                          const std::vector<std::pair<std::string, std::string>>& directives = {});

std::string format_ratio(double r);
std::string emit_trace(const SolveResult& r);
nlohmann::json to_json(const SolveResult& r, const OracleReport* oracle = nullptr);
nlohmann::json to_json(const OracleReport& o);

// Exit code for the command line tool: 0 cycle, 1 not unifiable,
// 2 stability violation or exhausted.
int exit_code(const Outcome& o);

}  // namespace schematic
