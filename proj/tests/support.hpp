#pragma once

// Test-only oracles and random generators. Nothing here calls the Weyl product or
// operator action of the library; operators are evaluated by repeated formal
// differentiation and multiplication on polynomials.

#include <random>
#include <set>
#include <vector>

#include "capelli/capelli.hpp"

namespace capelli::testing {

inline std::vector<VarId> standard_vars(int n) {
  std::vector<VarId> vs;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) vs.push_back(VarId::x(i, j));
  return vs;
}

inline std::vector<VarId> symmetric_vars(int n) {
  std::vector<VarId> vs;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) vs.push_back(VarId::xs(i, j));
  return vs;
}

/// Applies x^a d^b to p by differentiating b_v times per variable, then multiplying.
inline Polynomial act_by_differentiation(const WeylElement& op, const Polynomial& p) {
  Polynomial out;
  for (const auto& [m, c] : op.terms()) {
    Polynomial q = p;
    for (const auto& [v, order] : m.d.entries())
      for (unsigned k = 0; k < order; ++k) q = diff(q, v);
    out += Polynomial::monomial(m.x, c) * q;
  }
  return out;
}

/// A word of elementary operators applied right to left: true = multiply by x_v, false = d/dx_v.
struct Letter {
  VarId v;
  bool multiply;
};

inline Polynomial act_word(const std::vector<Letter>& word, Polynomial p) {
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    p = it->multiply ? Polynomial::variable(it->v) * p : diff(p, it->v);
  return p;
}

/// All monomials in vars of total degree <= d.
inline std::vector<Polynomial> monomials_up_to(const std::vector<VarId>& vars, unsigned d) {
  std::vector<Polynomial> out;
  std::vector<Exponents::Entry> current;
  auto rec = [&](auto&& self, std::size_t idx, unsigned budget) -> void {
    if (idx == vars.size()) {
      out.push_back(Polynomial::monomial(Exponents::from(current), 1));
      return;
    }
    for (unsigned p = 0; p <= budget; ++p) {
      if (p > 0) current.emplace_back(vars[idx], p);
      self(self, idx + 1, budget - p);
      if (p > 0) current.pop_back();
    }
  };
  rec(rec, 0, d);
  return out;
}

/// Bounded-degree faithfulness: operators with d-degree <= d agree iff they agree on
/// every monomial of degree <= d.
inline bool act_equal(const WeylElement& a, const WeylElement& b, const std::vector<VarId>& vars) {
  const unsigned d = std::max(a.derivative_degree(), b.derivative_degree());
  for (const auto& mono : monomials_up_to(vars, d))
    if (act_by_differentiation(a, mono) != act_by_differentiation(b, mono)) return false;
  return true;
}

/// Cofactor expansion along the first row.
inline Polynomial cofactor_det(const PolynomialMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Polynomial out;
  for (std::size_t j = 0; j < n; ++j) {
    PolynomialMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(row);
    }
    const Polynomial term = m[0][j] * cofactor_det(minor);
    out += (j % 2 == 0) ? term : -term;
  }
  return out;
}

/// Every pair (sigma, phi) with phi an arbitrary choice in 1..i on Fix sigma, filtered
/// by the class condition written out directly.
inline std::vector<CapelliConfig> brute_force_class(int n, int m) {
  std::vector<CapelliConfig> out;
  std::vector<int> image(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) image[i] = i + 1;
  do {
    std::vector<int> fixed;
    for (int i = 1; i <= n; ++i)
      if (image[i - 1] == i) fixed.push_back(i);
    std::vector<int> choice(fixed.size(), 1);
    for (;;) {
      bool ok = true;
      std::map<int, int> phi;
      for (std::size_t t = 0; t < fixed.size(); ++t) {
        phi[fixed[t]] = choice[t];
        if (choice[t] < fixed[t] && fixed[t] < m) ok = false;
      }
      if (ok) out.emplace_back(Permutation(image), phi);
      std::size_t t = 0;
      while (t < fixed.size() && choice[t] == fixed[t]) choice[t++] = 1;
      if (t == fixed.size()) break;
      ++choice[t];
    }
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

/// Random normal-ordered operator over vars: up to max_terms terms with
/// x-degree + d-degree <= max_degree and coefficients in [-3, 3].
inline WeylElement random_weyl(std::mt19937& rng, const std::vector<VarId>& vars, unsigned max_degree,
                               int max_terms = 3) {
  std::uniform_int_distribution<int> n_terms(1, max_terms);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  std::uniform_int_distribution<unsigned> degree(0, max_degree);
  WeylElement out;
  const int count = n_terms(rng);
  for (int t = 0; t < count; ++t) {
    const unsigned deg = degree(rng);
    std::vector<Exponents::Entry> xs;
    std::vector<Exponents::Entry> ds;
    for (unsigned k = 0; k < deg; ++k) {
      if (rng() % 2 == 0)
        xs.emplace_back(vars[pick(rng)], 1);
      else
        ds.emplace_back(vars[pick(rng)], 1);
    }
    out.add_term(WeylMonomial{Exponents::from(xs), Exponents::from(ds)}, coeff(rng));
  }
  return out;
}

inline Polynomial random_polynomial(std::mt19937& rng, const std::vector<VarId>& vars, unsigned max_degree,
                                    int max_terms = 4) {
  Polynomial out;
  const WeylElement w = random_weyl(rng, vars, max_degree, max_terms);
  for (const auto& [m, c] : w.terms())
    out.add_term(m.x + m.d, c);
  return out;
}

inline Polynomial random_monomial(std::mt19937& rng, const std::vector<VarId>& vars, unsigned max_degree) {
  std::uniform_int_distribution<unsigned> degree(0, max_degree);
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  std::vector<Exponents::Entry> e;
  const unsigned deg = degree(rng);
  for (unsigned k = 0; k < deg; ++k) e.emplace_back(vars[pick(rng)], 1);
  return Polynomial::monomial(Exponents::from(e), 1);
}

}  // namespace capelli::testing
