#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "capelli/detail/permutations.hpp"
#include "capelli/detail/text.hpp"

namespace capelli {

using Integer = boost::multiprecision::cpp_int;

enum class Family { X, Y };

/// Standard grid: ordered pairs (i, j). Symmetric grid: unordered pairs {i, j}.
enum class Grid { standard, symmetric };

/// Index of one indeterminate. Symmetric-grid indices are stored with row <= col.
struct VarId {
  Family family = Family::X;
  Grid grid = Grid::standard;
  int row = 1;
  int col = 1;

  static VarId make(Family family, Grid grid, int i, int j) {
    if (i < 1 || j < 1) throw std::out_of_range("variable indices are 1-based");
    if (grid == Grid::symmetric && i > j) std::swap(i, j);
    return VarId{family, grid, i, j};
  }
  static VarId x(int i, int j) { return make(Family::X, Grid::standard, i, j); }
  static VarId y(int i, int j) { return make(Family::Y, Grid::standard, i, j); }
  static VarId xs(int i, int j) { return make(Family::X, Grid::symmetric, i, j); }
  static VarId ys(int i, int j) { return make(Family::Y, Grid::symmetric, i, j); }

  /// The same index in the other family (x <-> y).
  [[nodiscard]] VarId partner() const {
    return VarId{family == Family::X ? Family::Y : Family::X, grid, row, col};
  }

  auto operator<=>(const VarId&) const = default;

  /// Text name: x/xs/y/ys, or d/ds when the index stands for a partial derivative.
  [[nodiscard]] std::string to_string(bool as_derivative = false) const {
    std::string name = as_derivative ? "d" : (family == Family::X ? "x" : "y");
    if (grid == Grid::symmetric) name += 's';
    return name + '[' + std::to_string(row) + ',' + std::to_string(col) + ']';
  }
};

/// Sparse exponent vector; entries sorted by variable, exponents strictly positive.
class Exponents {
 public:
  using Entry = std::pair<VarId, unsigned>;

  Exponents() = default;

  static Exponents single(VarId v, unsigned power = 1) {
    Exponents e;
    if (power > 0) e.entries_.emplace_back(v, power);
    return e;
  }

  /// Builds from arbitrary (variable, power) pairs, merging duplicates.
  static Exponents from(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    Exponents e;
    for (const auto& [v, p] : entries) {
      if (p == 0) continue;
      if (!e.entries_.empty() && e.entries_.back().first == v)
        e.entries_.back().second += p;
      else
        e.entries_.emplace_back(v, p);
    }
    return e;
  }

  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }

  [[nodiscard]] unsigned get(const VarId& v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, const VarId& key) { return e.first < key; });
    return (it != entries_.end() && it->first == v) ? it->second : 0U;
  }

  [[nodiscard]] unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [v, p] : entries_) d += p;
    return d;
  }

  /// Componentwise sum (monomial product).
  friend Exponents operator+(const Exponents& a, const Exponents& b) {
    Exponents out;
    out.entries_.reserve(a.entries_.size() + b.entries_.size());
    auto i = a.entries_.begin();
    auto j = b.entries_.begin();
    while (i != a.entries_.end() || j != b.entries_.end()) {
      if (j == b.entries_.end() || (i != a.entries_.end() && i->first < j->first)) {
        out.entries_.push_back(*i++);
      } else if (i == a.entries_.end() || j->first < i->first) {
        out.entries_.push_back(*j++);
      } else {
        out.entries_.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      }
    }
    return out;
  }

  /// Componentwise difference; requires b <= a componentwise.
  friend Exponents operator-(const Exponents& a, const Exponents& b) {
    Exponents out;
    auto j = b.entries_.begin();
    for (const auto& [v, p] : a.entries_) {
      unsigned sub = 0;
      if (j != b.entries_.end() && j->first == v) sub = (j++)->second;
      if (sub > p) throw std::logic_error("exponent underflow");
      if (p > sub) out.entries_.emplace_back(v, p - sub);
    }
    if (j != b.entries_.end()) throw std::logic_error("exponent underflow");
    return out;
  }

  auto operator<=>(const Exponents&) const = default;

  /// Renders e.g. x[1,1]^2*x[1,2]; empty for the unit monomial.
  [[nodiscard]] std::string to_string(bool as_derivative = false) const {
    std::string out;
    for (const auto& [v, p] : entries_) {
      if (!out.empty()) out += '*';
      out += v.to_string(as_derivative);
      if (p != 1) out += '^' + std::to_string(p);
    }
    return out;
  }

 private:
  std::vector<Entry> entries_;
};

namespace detail {

inline std::optional<Grid> join_grids(std::optional<Grid> a, std::optional<Grid> b) {
  if (!a) return b;
  if (!b) return a;
  if (*a != *b) throw std::invalid_argument("cannot mix standard-grid and symmetric-grid variables");
  return a;
}

inline std::optional<Grid> grid_of(const Exponents& e) {
  std::optional<Grid> g;
  for (const auto& [v, p] : e.entries()) g = join_grids(g, v.grid);
  return g;
}

}  // namespace detail

/// Sparse multivariate polynomial with arbitrary-precision integer coefficients.
/// Canonical: no zero coefficients are stored, so value equality is map equality.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Integer>;

  Polynomial() = default;
  Polynomial(Integer constant) {  // NOLINT(google-explicit-constructor)
    add_term(Exponents{}, std::move(constant));
  }
  Polynomial(int constant) : Polynomial(Integer(constant)) {}  // NOLINT(google-explicit-constructor)

  static Polynomial variable(const VarId& v) { return monomial(Exponents::single(v), 1); }
  static Polynomial monomial(Exponents e, Integer coeff) {
    Polynomial p;
    p.add_term(std::move(e), std::move(coeff));
    return p;
  }

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::optional<Grid> grid() const { return grid_; }

  [[nodiscard]] Integer coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  [[nodiscard]] unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.total_degree());
    return d;
  }

  /// Accumulates coeff * x^e, pruning the entry if it cancels.
  void add_term(Exponents e, Integer coeff) {
    if (coeff == 0) return;
    grid_ = detail::join_grids(grid_, detail::grid_of(e));
    auto [it, inserted] = terms_.try_emplace(std::move(e), coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& q) {
    grid_ = detail::join_grids(grid_, q.grid_);
    for (const auto& [e, c] : q.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& q) {
    grid_ = detail::join_grids(grid_, q.grid_);
    for (const auto& [e, c] : q.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Polynomial& q) { return *this = *this * q; }

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator-(const Polynomial& p) {
    Polynomial out;
    out.grid_ = p.grid_;
    for (const auto& [e, c] : p.terms_) out.terms_.emplace(e, -c);
    return out;
  }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    Polynomial out;
    out.grid_ = detail::join_grids(p.grid_, q.grid_);
    for (const auto& [e1, c1] : p.terms_)
      for (const auto& [e2, c2] : q.terms_) out.add_term(e1 + e2, c1 * c2);
    return out;
  }

  friend bool operator==(const Polynomial& p, const Polynomial& q) { return p.terms_ == q.terms_; }

  /// Canonical text form, terms in ascending lexicographic order of exponent lists.
  [[nodiscard]] std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) detail::append_term(out, c, e.to_string());
    return out;
  }
  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

 private:
  TermMap terms_;
  std::optional<Grid> grid_;
};

/// Formal partial derivative with respect to the single stored variable v.
inline Polynomial diff(const Polynomial& p, const VarId& v) {
  Polynomial out;
  for (const auto& [e, c] : p.terms()) {
    const unsigned power = e.get(v);
    if (power == 0) continue;
    out.add_term(e - Exponents::single(v), c * power);
  }
  return out;
}

inline Polynomial pow(const Polynomial& p, unsigned k) {
  Polynomial out(1);
  for (unsigned i = 0; i < k; ++i) out *= p;
  return out;
}

using PolynomialMatrix = std::vector<std::vector<Polynomial>>;

/// Leibniz determinant: sum over sigma of sign(sigma) * prod_j M[sigma(j)][j].
inline Polynomial det(const PolynomialMatrix& m) {
  const auto n = static_cast<int>(m.size());
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("det: matrix is not square");
  if (n == 0) return Polynomial(1);
  Polynomial out;
  detail::for_each_permutation(n, [&](const std::vector<int>& sigma, int sign) {
    Polynomial term(sign);
    for (int j = 0; j < n && !term.is_zero(); ++j) term *= m[sigma[j]][j];
    out += term;
  });
  return out;
}

/// Matrix of plain variables of one family, M[i][j] = v(i+1, j+1).
inline PolynomialMatrix variable_matrix(Family family, Grid grid, int rows, int cols) {
  PolynomialMatrix m(static_cast<std::size_t>(rows));
  for (int i = 1; i <= rows; ++i)
    for (int j = 1; j <= cols; ++j)
      m[i - 1].push_back(Polynomial::variable(VarId::make(family, grid, i, j)));
  return m;
}

/// Parses the canonical text form; accepts x, xs, y, ys factors.
inline Polynomial parse_polynomial(std::string_view text) {
  Polynomial out;
  for (const auto& term : detail::TermParser(text).parse()) {
    std::vector<Exponents::Entry> entries;
    for (const auto& f : term.factors) {
      Family family;
      Grid grid;
      if (f.name == "x" || f.name == "xs") {
        family = Family::X;
      } else if (f.name == "y" || f.name == "ys") {
        family = Family::Y;
      } else {
        throw std::invalid_argument("unknown polynomial variable '" + f.name + "'");
      }
      grid = f.name.size() == 2 ? Grid::symmetric : Grid::standard;
      entries.emplace_back(VarId::make(family, grid, f.row, f.col), f.exponent);
    }
    out.add_term(Exponents::from(std::move(entries)), term.coeff);
  }
  return out;
}

}  // namespace capelli
