#pragma once

// Command-line front end: literal parsing, config merging, run records.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hurlab/common.hpp"
#include "hurlab/qfield.hpp"

namespace hurlab::cli {

// alpha as written on the command line:
//   sqrt:d:p:r    (p + sqrt d) / r
//   sqrt:d:p:q:r  (p + q sqrt d) / r
//   rat:a:q       a / q
//   0.3           a decimal
struct AlphaLiteral {
  enum class Kind { sqrt, rat, decimal } kind = Kind::decimal;
  long d = 0, p = 0, q = 1, r = 1;  // sqrt
  long a = 0, den = 1;              // rat
  double value = 0.0;
  std::string decimal_text;

  std::string text() const;  // canonical form; parse(text()) reproduces *this
  std::optional<AlgebraicParam> algebraic() const;
  bool operator==(const AlphaLiteral& o) const { return text() == o.text(); }
};

AlphaLiteral parse_alpha(const std::string& s);
// "re,im" or "re"
Complex parse_complex(const std::string& s);
std::vector<double> parse_doubles(const std::string& s);
// "n:m,n:m,..."
RelationTuple parse_tuple(const std::string& s);

// Default output directory when --out is not given.
inline constexpr const char* kOutEnv = "HURLAB_OUT";

// Runs one command line (argv[0] is the program name). Exit codes: 0 success,
// 2 when every certificate request was refused, 1 on errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hurlab::cli
