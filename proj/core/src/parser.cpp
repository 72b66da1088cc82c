// SPDX-License-Identifier: Apache-2.0

#include "moa/parser.hpp"

#include <cctype>
#include <limits>
#include <vector>

#include "moa/error.hpp"

namespace moa {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ShapeTable& shapes) : text_(text), shapes_(shapes) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "' after expression");
    return e;
  }

 private:
  struct Pos {
    int line, column;
  };

  [[noreturn]] void fail(const std::string& message) const { fail_at(message, here()); }
  [[noreturn]] void fail_at(const std::string& message, Pos p) const {
    throw ParseError(message, p.line, p.column);
  }

  Pos here() const {
    Pos p{1, 1};
    for (std::size_t k = 0; k < pos_ && k < text_.size(); ++k) {
      if (text_[k] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    return p;
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    skip();
    if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
    if (text_[pos_] != c) fail(std::string("expected '") + c + "', found '" + text_[pos_] + "'");
    ++pos_;
  }

  std::string name() {
    skip();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
    }
    if (start == pos_) {
      fail(pos_ < text_.size() ? "expected a name, found '" + std::string(1, text_[pos_]) + "'"
                               : "expected a name but reached end of input");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Extent integer() {
    skip();
    const Pos at = here();
    Extent v = 0;
    std::size_t digits = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const int d = text_[pos_] - '0';
      if (v > (std::numeric_limits<Extent>::max() - d) / 10) fail_at("integer too large", at);
      v = v * 10 + d;
      ++pos_;
      ++digits;
    }
    if (digits == 0) fail("expected a non-negative integer");
    return v;
  }

  std::vector<Extent> list() {
    expect('[');
    std::vector<Extent> v;
    if (!peek(']')) {
      v.push_back(integer());
      while (peek(',')) {
        ++pos_;
        v.push_back(integer());
      }
    }
    expect(']');
    return v;
  }

  Expr expr() {
    skip();
    const Pos at = here();
    const std::string id = name();
    if (!peek('(')) {
      auto it = shapes_.find(id);
      if (it == shapes_.end()) fail_at("no array bound for '" + id + "'", at);
      return leaf(id, it->second);
    }
    expect('(');
    Expr result;
    if (id == "outer") {
      const Pos op_at = here();
      const std::string op_name = name();
      ScalarOp op{};
      try {
        op = scalar_op_from_string(op_name);
      } catch (const Error& e) {
        fail_at(e.what(), op_at);
      }
      expect(',');
      Expr l = expr();
      expect(',');
      Expr r = expr();
      result = outer(op, std::move(l), std::move(r));
    } else if (id == "kron") {
      Expr l = expr();
      expect(',');
      Expr r = expr();
      result = kron(std::move(l), std::move(r));
    } else if (id == "transpose") {
      std::vector<Extent> t = list();
      expect(',');
      Expr c = expr();
      result = transpose(AxisPermutation(std::move(t)), std::move(c));
    } else if (id == "reshape") {
      std::vector<Extent> s = list();
      expect(',');
      Expr c = expr();
      result = reshape(Shape(std::move(s)), std::move(c));
    } else {
      fail_at("unknown operator '" + id + "' (expected outer, kron, transpose or reshape)", at);
    }
    expect(')');
    return result;
  }

  std::string_view text_;
  const ShapeTable& shapes_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, const ShapeTable& shapes) {
  return Parser(text, shapes).parse();
}

Expr parse_expression(std::string_view text, const Environment& env) {
  ShapeTable shapes;
  for (const auto& [id, a] : env) shapes.emplace(id, a.shape());
  return parse_expression(text, shapes);
}

}  // namespace moa
