#pragma once

#include <stdexcept>
#include <vector>

#include "capelli/configs.hpp"
#include "capelli/polynomial.hpp"
#include "capelli/weyl.hpp"

namespace capelli {

/// Polynomial in commuting x and y variables on one grid; y stands in for d/dx
/// until operatorization.
using BiPolynomial = Polynomial;

/// How x^a y^b becomes an operator: normal puts x^a left of d^b, dual puts d^b left of x^a.
enum class OperatorizeMode { normal, dual };

/// Scalar standing in for a suppressed factor.
enum class UnitValue { plus_one, minus_one };

inline int unit_scalar(UnitValue u) { return u == UnitValue::plus_one ? 1 : -1; }

/// Standard grid: sum_k x_ik y_jk. Symmetric grid: sum_k (1 + delta_jk) xs_ik ys_jk.
inline BiPolynomial delta_factor(Grid grid, int n, int i, int j) {
  if (n < 1 || i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("delta_factor index out of range");
  BiPolynomial out;
  for (int k = 1; k <= n; ++k) {
    const auto x = VarId::make(Family::X, grid, i, k);
    const auto y = VarId::make(Family::Y, grid, j, k);
    const int weight = (grid == Grid::symmetric && j == k) ? 2 : 1;
    out.add_term(Exponents::single(x) + Exponents::single(y), weight);
  }
  return out;
}

/// Linear map x^a y^b -> x^a d^b (normal) or d^b x^a renormalized (dual).
inline WeylElement operatorize(const BiPolynomial& f, OperatorizeMode mode) {
  WeylElement out;
  for (const auto& [e, c] : f.terms()) {
    std::vector<Exponents::Entry> xs;
    std::vector<Exponents::Entry> ds;
    for (const auto& [v, p] : e.entries()) {
      if (v.family == Family::X)
        xs.emplace_back(v, p);
      else
        ds.emplace_back(v.partner(), p);
    }
    auto x = Exponents::from(std::move(xs));
    auto d = Exponents::from(std::move(ds));
    if (mode == OperatorizeMode::normal)
      out.add_term(WeylMonomial{std::move(x), std::move(d)}, c);
    else
      out += WeylElement::term({}, std::move(d), 1) * WeylElement::term(std::move(x), {}, c);
  }
  return out;
}

/// Configuration operator for (sigma, phi) at stage m:
///   op(F_n) ... op(F_m) * op(F_{m-1} ... F_1),
/// with F_i the delta factor at (sigma(i), i) in normal mode and at (i, sigma(i)) in
/// dual mode, replaced by the unit scalar when i is a fixed point with phi(i) != i.
/// Factors below m are multiplied commutatively first.
inline WeylElement config_operator(const CapelliConfig& c, int m, Grid grid, OperatorizeMode mode,
                                   UnitValue unit) {
  const int n = c.n();
  detail::check_range(m, 1, n + 1, "config_operator");
  const auto& sigma = c.sigma();
  auto factor = [&](int i) -> BiPolynomial {
    if (sigma.fixes(i) && c.phi().at(i) != i) return BiPolynomial(unit_scalar(unit));
    // Dual mode uses the transposed factor so that op(F_i) alone is d_{sigma(i) i}.
    return mode == OperatorizeMode::normal ? delta_factor(grid, n, sigma(i), i) : delta_factor(grid, n, i, sigma(i));
  };

  WeylElement out(1);
  for (int i = n; i >= m; --i) out *= operatorize(factor(i), mode);
  BiPolynomial bundle(1);
  for (int i = m - 1; i >= 1; --i) bundle *= factor(i);
  out *= operatorize(bundle, mode);
  return out;
}

}  // namespace capelli
