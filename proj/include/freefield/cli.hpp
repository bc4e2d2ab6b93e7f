#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "freefield/fqctx.hpp"
#include "freefield/fqpoly.hpp"

namespace freefield::cli {

/// Outcome of one command invocation: the report document, the exact bytes
/// destined for stdout (JSON or CSV), where they should go, and the process
/// exit code (0 ok, 2 usage, 3 identity violation, 4 cap exceeded).
struct ExecResult {
  nlohmann::ordered_json report;
  std::string payload;
  std::string out_path;  // empty: stdout
  int exit_code = 0;
};

/// Polynomial grammar: terms joined by '+'/'-'; a term is
/// [coeff '*'] x ['^' exponent] or a bare coeff; coeff is an integer
/// (reduced mod p) or a bracketed digit list '[c0,c1,...]' over the
/// coefficient field's base.  Whitespace between tokens is ignored.
/// Failures raise ParseError carrying the byte offset.
FqPoly parse_poly(const std::string& text,
                  const std::shared_ptr<const FqCtx>& field);

/// Canonical rendering (descending powers, coefficients of one omitted);
/// parse_poly(render_poly(p)) round-trips.
std::string render_poly(const FqPoly& p);

/// Runs one command; never prints.  `args` excludes the program name.
ExecResult execute(const std::vector<std::string>& args);

/// Full process entry: execute + payload emission.  Returns the exit code.
int run_main(int argc, char** argv);

}  // namespace freefield::cli
