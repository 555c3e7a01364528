#include "fbsim/expr.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace fbsim {

OperatorExpr OperatorExpr::number(Complex c) {
  OperatorExpr e;
  e.kind = Kind::Scalar;
  e.scalar = c;
  return e;
}

OperatorExpr OperatorExpr::generator(std::string label, Generator g) {
  OperatorExpr e;
  e.kind = Kind::Gen;
  e.label = std::move(label);
  e.gen = g;
  return e;
}

OperatorExpr OperatorExpr::sum(std::vector<OperatorExpr> terms) {
  OperatorExpr e;
  e.kind = Kind::Sum;
  e.children = std::move(terms);
  return e;
}

OperatorExpr OperatorExpr::prod(std::vector<OperatorExpr> factors) {
  OperatorExpr e;
  e.kind = Kind::Prod;
  e.children = std::move(factors);
  return e;
}

OperatorExpr OperatorExpr::dag(OperatorExpr inner) {
  OperatorExpr e;
  e.kind = Kind::Dag;
  e.children.push_back(std::move(inner));
  return e;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  OperatorExpr parse() {
    OperatorExpr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw ExprError("unexpected trailing input", pos_);
    return e;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  OperatorExpr parse_sum() {
    std::vector<OperatorExpr> terms;
    terms.push_back(parse_term());
    while (true) {
      if (eat('+')) {
        terms.push_back(parse_term());
      } else if (eat('-')) {
        terms.push_back(OperatorExpr::prod(
            {OperatorExpr::number({-1.0, 0.0}), parse_term()}));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? std::move(terms[0])
                             : OperatorExpr::sum(std::move(terms));
  }

  OperatorExpr parse_term() {
    std::vector<OperatorExpr> factors;
    factors.push_back(parse_factor());
    while (eat('*')) factors.push_back(parse_factor());
    return factors.size() == 1 ? std::move(factors[0])
                               : OperatorExpr::prod(std::move(factors));
  }

  OperatorExpr parse_factor() {
    if (eat('-'))
      return OperatorExpr::prod({OperatorExpr::number({-1.0, 0.0}), parse_factor()});
    return parse_primary();
  }

  OperatorExpr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ExprError("unexpected end of expression", pos_);
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      OperatorExpr e = parse_sum();
      if (!eat(')')) throw ExprError("expected ')'", pos_);
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw ExprError(std::string("unexpected character '") + c + "'", pos_);
  }

  OperatorExpr parse_number() {
    std::size_t start = pos_;
    double value = 0.0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc{})
      throw ExprError("malformed numeric literal", start);
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      return OperatorExpr::number({0.0, value});
    }
    return OperatorExpr::number({value, 0.0});
  }

  OperatorExpr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string word = text_.substr(start, pos_ - start);

    if (word == "id") return OperatorExpr::generator("", Generator::Identity);
    if (word == "dag") {
      if (!eat('(')) throw ExprError("expected '(' after dag", pos_);
      OperatorExpr inner = parse_sum();
      if (!eat(')')) throw ExprError("expected ')'", pos_);
      return OperatorExpr::dag(std::move(inner));
    }

    auto sep = word.find('_');
    if (sep == std::string::npos || sep + 1 >= word.size())
      throw ExprError("unknown identifier '" + word +
                      "' (expected gen_label such as a_1, x_2, sz_q)", start);
    std::string gen = word.substr(0, sep);
    std::string label = word.substr(sep + 1);
    try {
      return OperatorExpr::generator(label, generator_from_name(gen));
    } catch (const SpaceError&) {
      throw ExprError("unknown generator '" + gen + "' in '" + word + "'", start);
    }
  }
};

/// Evaluation value: scalar until an operator forces matrix form.
struct Value {
  bool is_scalar = true;
  Complex scalar{1.0, 0.0};
  Matrix mat;  // valid when !is_scalar

  Matrix as_matrix(int dim) const {
    if (is_scalar) return scalar * Matrix::Identity(dim, dim);
    return mat;
  }
};

Value eval(const OperatorExpr& e, const SpaceSignature& space) {
  const int d = space.total_dim();
  switch (e.kind) {
    case OperatorExpr::Kind::Scalar:
      return {true, e.scalar, {}};
    case OperatorExpr::Kind::Gen: {
      if (e.gen == Generator::Identity) return {true, {1.0, 0.0}, {}};
      return {false, {}, build_generator(space, e.label, e.gen).mat};
    }
    case OperatorExpr::Kind::Sum: {
      Value acc{true, {0.0, 0.0}, {}};
      bool any_matrix = false;
      for (const auto& child : e.children)
        if (eval(child, space).is_scalar == false) { any_matrix = true; break; }
      if (!any_matrix) {
        for (const auto& child : e.children) acc.scalar += eval(child, space).scalar;
        return acc;
      }
      Matrix m = Matrix::Zero(d, d);
      for (const auto& child : e.children) m += eval(child, space).as_matrix(d);
      return {false, {}, std::move(m)};
    }
    case OperatorExpr::Kind::Prod: {
      Complex coeff{1.0, 0.0};
      Matrix m;
      bool have_matrix = false;
      for (const auto& child : e.children) {
        Value v = eval(child, space);
        if (v.is_scalar) {
          coeff *= v.scalar;
        } else if (!have_matrix) {
          m = std::move(v.mat);
          have_matrix = true;
        } else {
          m = Matrix(m * v.mat);
        }
      }
      if (!have_matrix) return {true, coeff, {}};
      return {false, {}, Matrix(coeff * m)};
    }
    case OperatorExpr::Kind::Dag: {
      Value v = eval(e.children.at(0), space);
      if (v.is_scalar) return {true, std::conj(v.scalar), {}};
      return {false, {}, Matrix(v.mat.adjoint())};
    }
  }
  throw ExprError("corrupt expression node", 0);
}

}  // namespace

OperatorExpr parse_expr(const std::string& text) { return Parser(text).parse(); }

OperatorMatrix evaluate_expr(const OperatorExpr& expr, const SpaceSignature& space) {
  Value v = eval(expr, space);
  return {space, v.as_matrix(space.total_dim())};
}

}  // namespace fbsim
