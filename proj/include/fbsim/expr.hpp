#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fbsim/operator.hpp"

namespace fbsim {

/// Parse error with a 0-based offset into the expression text. The config
/// layer translates offsets into line/column positions.
class ExprError : public std::invalid_argument {
 public:
  ExprError(const std::string& msg, std::size_t offset)
      : std::invalid_argument(msg), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_ = 0;
};

/// Expression tree over named subsystem generators.
/// Grammar (CLI operator expressions):
///   expr    := term (('+'|'-') term)*
///   term    := factor ('*' factor)*
///   factor  := ['-'] primary
///   primary := number | ident | 'dag' '(' expr ')' | '(' expr ')'
///   number  := float ['i']            e.g. 1.5, 2i, .25
///   ident   := 'id' | gen '_' label   gen in {a, adag, x, y, n, sx, sy, sz}
struct OperatorExpr {
  enum class Kind { Scalar, Gen, Sum, Prod, Dag };

  Kind kind = Kind::Scalar;
  Complex scalar{0.0, 0.0};            // Kind::Scalar
  std::string label;                   // Kind::Gen
  Generator gen = Generator::Identity; // Kind::Gen
  std::vector<OperatorExpr> children;  // Sum / Prod / Dag(1)

  static OperatorExpr number(Complex c);
  static OperatorExpr generator(std::string label, Generator g);
  static OperatorExpr sum(std::vector<OperatorExpr> terms);
  static OperatorExpr prod(std::vector<OperatorExpr> factors);
  static OperatorExpr dag(OperatorExpr inner);
};

OperatorExpr parse_expr(const std::string& text);

/// Evaluate on `space`; a pure-scalar expression becomes scalar * identity,
/// and scalars mixed into sums are promoted the same way.
OperatorMatrix evaluate_expr(const OperatorExpr& expr, const SpaceSignature& space);

inline OperatorMatrix evaluate_expr(const std::string& text,
                                    const SpaceSignature& space) {
  return evaluate_expr(parse_expr(text), space);
}

}  // namespace fbsim
