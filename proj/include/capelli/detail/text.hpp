#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace capelli::detail {

// Shared tokenizer for the polynomial and Weyl text forms:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := integer | name '[' int ',' int ']' ['^' int]

struct ParsedFactor {
  std::string name;
  int row = 0;
  int col = 0;
  unsigned exponent = 1;
};

struct ParsedTerm {
  boost::multiprecision::cpp_int coeff = 1;
  std::vector<ParsedFactor> factors;
};

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  std::vector<ParsedTerm> parse() {
    std::vector<ParsedTerm> terms;
    skip_space();
    if (at_end()) fail("empty expression");
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    for (;;) {
      ParsedTerm term = parse_term();
      if (negative) term.coeff = -term.coeff;
      terms.push_back(std::move(term));
      skip_space();
      if (at_end()) break;
      if (peek() != '+' && peek() != '-') fail("expected '+' or '-'");
      negative = peek() == '-';
      ++pos_;
    }
    return terms;
  }

 private:
  ParsedTerm parse_term() {
    ParsedTerm term;
    for (;;) {
      skip_space();
      if (at_end()) fail("expected a factor");
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        term.coeff *= parse_integer();
      } else if (std::isalpha(static_cast<unsigned char>(peek()))) {
        term.factors.push_back(parse_factor());
      } else {
        fail("unexpected character");
      }
      skip_space();
      if (at_end() || peek() != '*') break;
      ++pos_;
    }
    return term;
  }

  ParsedFactor parse_factor() {
    ParsedFactor factor;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) factor.name += text_[pos_++];
    expect('[');
    factor.row = parse_small();
    expect(',');
    factor.col = parse_small();
    expect(']');
    skip_space();
    if (!at_end() && peek() == '^') {
      ++pos_;
      factor.exponent = static_cast<unsigned>(parse_small());
      if (factor.exponent == 0) fail("zero exponent");
    }
    return factor;
  }

  boost::multiprecision::cpp_int parse_integer() {
    skip_space();
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return boost::multiprecision::cpp_int(std::string(text_.substr(start, pos_ - start)));
  }

  int parse_small() {
    auto value = parse_integer();
    if (value > 1'000'000) fail("integer out of range");
    return value.convert_to<int>();
  }

  void expect(char c) {
    skip_space();
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
  [[nodiscard]] char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

/// Appends one signed term to a sum being rendered, e.g. " - 3*x[1,1]".
inline void append_term(std::string& out, const boost::multiprecision::cpp_int& coeff,
                        const std::string& monomial) {
  const bool negative = coeff < 0;
  const boost::multiprecision::cpp_int magnitude = negative ? boost::multiprecision::cpp_int(-coeff) : coeff;
  if (out.empty()) {
    if (negative) out += '-';
  } else {
    out += negative ? " - " : " + ";
  }
  if (monomial.empty()) {
    out += magnitude.str();
  } else if (magnitude == 1) {
    out += monomial;
  } else {
    out += magnitude.str();
    out += '*';
    out += monomial;
  }
}

}  // namespace capelli::detail
