#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "capelli/polynomial.hpp"

namespace capelli {

/// Key of a normal-ordered monomial x^x * d^d (all multiplications left of all partials).
struct WeylMonomial {
  Exponents x;
  Exponents d;

  auto operator<=>(const WeylMonomial&) const = default;

  [[nodiscard]] std::string to_string() const {
    std::string xs = x.to_string();
    std::string ds = d.to_string(true);
    if (xs.empty()) return ds;
    if (ds.empty()) return xs;
    return xs + '*' + ds;
  }
};

namespace detail {

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

/// n (n-1) ... (n-k+1)
inline Integer falling_factorial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer r = 1;
  for (unsigned i = 0; i < k; ++i) r *= (n - i);
  return r;
}

}  // namespace detail

/// Element of the polynomial Weyl algebra over the X variables of one grid, kept in
/// normal order. The normal form is unique, so operator equality is map equality.
class WeylElement {
 public:
  using TermMap = std::map<WeylMonomial, Integer>;

  WeylElement() = default;
  WeylElement(Integer scalar) {  // NOLINT(google-explicit-constructor)
    add_term(WeylMonomial{}, std::move(scalar));
  }
  WeylElement(int scalar) : WeylElement(Integer(scalar)) {}  // NOLINT(google-explicit-constructor)

  /// Multiplication operator by x_v.
  static WeylElement x(const VarId& v) { return term(Exponents::single(v), {}, 1); }
  /// Partial derivative with respect to x_v.
  static WeylElement partial(const VarId& v) { return term({}, Exponents::single(v), 1); }
  static WeylElement term(Exponents x, Exponents d, Integer coeff) {
    WeylElement w;
    w.add_term(WeylMonomial{std::move(x), std::move(d)}, std::move(coeff));
    return w;
  }

  /// A commutative X-polynomial viewed as a multiplication operator.
  static WeylElement multiplication(const Polynomial& p) {
    WeylElement w;
    for (const auto& [e, c] : p.terms()) w.add_term(WeylMonomial{e, {}}, c);
    return w;
  }

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::optional<Grid> grid() const { return grid_; }

  [[nodiscard]] Integer coefficient(const WeylMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  /// Highest total order of the partial-derivative part over all terms.
  [[nodiscard]] unsigned derivative_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.d.total_degree());
    return d;
  }

  void add_term(WeylMonomial m, Integer coeff) {
    if (coeff == 0) return;
    for (const auto* e : {&m.x, &m.d})
      for (const auto& [v, p] : e->entries())
        if (v.family != Family::X) throw std::invalid_argument("Weyl terms range over X variables only");
    grid_ = detail::join_grids(grid_, detail::join_grids(detail::grid_of(m.x), detail::grid_of(m.d)));
    auto [it, inserted] = terms_.try_emplace(std::move(m), coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  WeylElement& operator+=(const WeylElement& b) {
    grid_ = detail::join_grids(grid_, b.grid_);
    for (const auto& [m, c] : b.terms_) add_term(m, c);
    return *this;
  }
  WeylElement& operator-=(const WeylElement& b) {
    grid_ = detail::join_grids(grid_, b.grid_);
    for (const auto& [m, c] : b.terms_) add_term(m, -c);
    return *this;
  }
  WeylElement& operator*=(const WeylElement& b) { return *this = *this * b; }

  friend WeylElement operator+(WeylElement a, const WeylElement& b) { return a += b; }
  friend WeylElement operator-(WeylElement a, const WeylElement& b) { return a -= b; }
  friend WeylElement operator-(const WeylElement& a) {
    WeylElement out;
    out.grid_ = a.grid_;
    for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, -c);
    return out;
  }

  /// Normal-ordered product. For each variable v,
  ///   d_v^b x_v^c = sum_k k! C(b,k) C(c,k) x_v^(c-k) d_v^(b-k),
  /// and distinct variables commute.
  friend WeylElement operator*(const WeylElement& a, const WeylElement& b) {
    WeylElement out;
    out.grid_ = detail::join_grids(a.grid_, b.grid_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) multiply_terms(out, ma, mb, ca * cb);
    return out;
  }

  friend bool operator==(const WeylElement& a, const WeylElement& b) { return a.terms_ == b.terms_; }

  [[nodiscard]] std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) detail::append_term(out, c, m.to_string());
    return out;
  }
  friend std::ostream& operator<<(std::ostream& os, const WeylElement& w) { return os << w.to_string(); }

 private:
  static void multiply_terms(WeylElement& out, const WeylMonomial& left, const WeylMonomial& right,
                             const Integer& coeff) {
    // Variables differentiated on the left and multiplied on the right contract.
    struct Contraction {
      VarId v;
      unsigned b;
      unsigned c;
    };
    std::vector<Contraction> contractions;
    for (const auto& [v, b] : left.d.entries()) {
      const unsigned c = right.x.get(v);
      if (c > 0) contractions.push_back({v, b, c});
    }
    if (contractions.empty()) {
      out.add_term(WeylMonomial{left.x + right.x, left.d + right.d}, coeff);
      return;
    }
    std::vector<unsigned> k(contractions.size(), 0);
    for (;;) {
      Integer weight = coeff;
      std::vector<Exponents::Entry> removed;
      for (std::size_t t = 0; t < contractions.size(); ++t) {
        const auto& [v, b, c] = contractions[t];
        weight *= detail::factorial(k[t]) * detail::binomial(b, k[t]) * detail::binomial(c, k[t]);
        if (k[t] > 0) removed.emplace_back(v, k[t]);
      }
      const Exponents taken = Exponents::from(std::move(removed));
      out.add_term(WeylMonomial{left.x + (right.x - taken), (left.d - taken) + right.d}, weight);

      std::size_t t = 0;
      for (; t < contractions.size(); ++t) {
        if (k[t] < std::min(contractions[t].b, contractions[t].c)) {
          ++k[t];
          break;
        }
        k[t] = 0;
      }
      if (t == contractions.size()) break;
    }
  }

  TermMap terms_;
  std::optional<Grid> grid_;
};

/// Action of a differential operator on a polynomial in the X variables.
inline Polynomial apply(const WeylElement& op, const Polynomial& p) {
  Polynomial out;
  for (const auto& [m, c] : op.terms()) {
    for (const auto& [e, pc] : p.terms()) {
      Integer weight = c * pc;
      for (const auto& [v, order] : m.d.entries()) {
        weight *= detail::falling_factorial(e.get(v), order);
        if (weight == 0) break;
      }
      if (weight == 0) continue;
      out.add_term(m.x + (e - m.d), weight);
    }
  }
  return out;
}

enum class GeneratorKind { D, S, d };

/// Polarization operator sum_{k=1..cols} x_ik d/dx_jk on a rows x cols standard grid.
inline WeylElement polarization(int rows, int cols, int i, int j) {
  if (i < 1 || j < 1 || i > rows || j > rows || cols < 1)
    throw std::out_of_range("polarization index out of range");
  WeylElement out;
  for (int k = 1; k <= cols; ++k)
    out.add_term(WeylMonomial{Exponents::single(VarId::x(i, k)), Exponents::single(VarId::x(j, k))}, 1);
  return out;
}

/// Generators on the n x n grid:
///   D_ij = sum_k x_ik d/dx_jk
///   S_ij = sum_k (1 + delta_jk) xs_ik d/dxs_jk   (symmetric grid)
///   d_ij = sum_k d/dx_ik x_jk = D_ji + n delta_ij
inline WeylElement generator(GeneratorKind kind, int n, int i, int j) {
  if (n < 1 || i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("generator index out of range");
  switch (kind) {
    case GeneratorKind::D:
      return polarization(n, n, i, j);
    case GeneratorKind::S: {
      WeylElement out;
      for (int k = 1; k <= n; ++k)
        out.add_term(WeylMonomial{Exponents::single(VarId::xs(i, k)), Exponents::single(VarId::xs(j, k))},
                     j == k ? 2 : 1);
      return out;
    }
    case GeneratorKind::d:
      return polarization(n, n, j, i) + WeylElement(i == j ? n : 0);
  }
  throw std::invalid_argument("unknown generator kind");
}

/// Parses the text form. Factors (x, xs, d, ds) are multiplied in the written
/// order, so non-normal-ordered input is normalized.
inline WeylElement parse_weyl(std::string_view text) {
  WeylElement out;
  for (const auto& term : detail::TermParser(text).parse()) {
    WeylElement product(term.coeff);
    for (const auto& f : term.factors) {
      const bool symmetric = f.name == "xs" || f.name == "ds";
      const auto grid = symmetric ? Grid::symmetric : Grid::standard;
      const auto v = VarId::make(Family::X, grid, f.row, f.col);
      WeylElement factor;
      if (f.name == "x" || f.name == "xs")
        factor = WeylElement::term(Exponents::single(v, f.exponent), {}, 1);
      else if (f.name == "d" || f.name == "ds")
        factor = WeylElement::term({}, Exponents::single(v, f.exponent), 1);
      else
        throw std::invalid_argument("unknown operator factor '" + f.name + "'");
      product *= factor;
    }
    out += product;
  }
  return out;
}

}  // namespace capelli
