#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "capelli/configs.hpp"
#include "capelli/detops.hpp"
#include "capelli/polarized.hpp"
#include "capelli/polynomial.hpp"
#include "capelli/weyl.hpp"

namespace capelli {

/// Outcome of one identity check. passed holds exactly when residual_terms == 0.
struct VerificationReport {
  std::string identity;
  int n = 0;
  std::optional<int> m;
  std::optional<int> s;
  bool passed = false;
  std::size_t residual_terms = 0;
  std::optional<std::string> pinned_convention;
  long long elapsed_ms = 0;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["n"] = r.n;
  if (r.m) j["m"] = *r.m;
  if (r.s) j["s"] = *r.s;
  j["passed"] = r.passed;
  j["residual_terms"] = r.residual_terms;
  j["pinned_convention"] = r.pinned_convention ? nlohmann::ordered_json(*r.pinned_convention) : nullptr;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

/// Inverse of to_json; throws std::invalid_argument on schema violations.
inline VerificationReport report_from_json(const nlohmann::json& j) {
  try {
    VerificationReport r;
    r.identity = j.at("identity").get<std::string>();
    r.n = j.at("n").get<int>();
    if (j.contains("m")) r.m = j.at("m").get<int>();
    if (j.contains("s")) r.s = j.at("s").get<int>();
    r.passed = j.at("passed").get<bool>();
    r.residual_terms = j.at("residual_terms").get<std::size_t>();
    if (!j.at("pinned_convention").is_null()) r.pinned_convention = j.at("pinned_convention").get<std::string>();
    r.elapsed_ms = j.at("elapsed_ms").get<long long>();
    if (r.passed != (r.residual_terms == 0)) throw std::invalid_argument("passed disagrees with residual_terms");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed verification report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Conventions: diagonal offsets and column order of the left-hand determinants.

enum class OffsetFamily { m_minus_i, n_minus_i, i_minus_1, zero };

inline std::string to_string(OffsetFamily f) {
  switch (f) {
    case OffsetFamily::m_minus_i: return "m-i";
    case OffsetFamily::n_minus_i: return "n-i";
    case OffsetFamily::i_minus_1: return "i-1";
    case OffsetFamily::zero: return "0";
  }
  return "?";
}

inline OffsetFamily offset_family_from_string(std::string_view s) {
  for (auto f : {OffsetFamily::m_minus_i, OffsetFamily::n_minus_i, OffsetFamily::i_minus_1, OffsetFamily::zero})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown offset family '" + std::string(s) + "'");
}

enum class OrderKind { natural, reversed };

struct Convention {
  OffsetFamily family = OffsetFamily::n_minus_i;
  int offset_sign = +1;
  OrderKind order = OrderKind::natural;

  /// Diagonal offset of row i (1-based) for a size x size matrix on an m x n grid.
  [[nodiscard]] int offset(int i, int n, int m) const {
    int base = 0;
    switch (family) {
      case OffsetFamily::m_minus_i: base = m - i; break;
      case OffsetFamily::n_minus_i: base = n - i; break;
      case OffsetFamily::i_minus_1: base = i - 1; break;
      case OffsetFamily::zero: base = 0; break;
    }
    return offset_sign * base;
  }

  [[nodiscard]] std::vector<int> offsets(int size, int n, int m) const {
    std::vector<int> out;
    for (int i = 1; i <= size; ++i) out.push_back(offset(i, n, m));
    return out;
  }

  [[nodiscard]] ColumnOrder column_order(int size) const {
    return order == OrderKind::natural ? ColumnOrder::natural(size) : ColumnOrder::reversed(size);
  }

  [[nodiscard]] std::string describe() const {
    std::string sign = offset_sign > 0 ? "+" : "-";
    return "offsets " + sign + "(" + to_string(family) + "), " +
           (order == OrderKind::natural ? "natural" : "reversed") + " column order";
  }

  friend bool operator==(const Convention&, const Convention&) = default;
};

// ---------------------------------------------------------------------------

struct VerifyOptions {
  /// Admit n = 4 (slow); n >= 5 is always rejected.
  bool allow_large = false;
  /// Added to the (1,1) diagonal entry of the left-hand matrix. Test hook for
  /// producing a deliberately broken identity.
  int offset_perturbation = 0;
};

namespace detail {

class Stopwatch {
 public:
  [[nodiscard]] long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void check_size(int n, const VerifyOptions& opts, const char* what) {
  if (n < 1) throw std::out_of_range(std::string(what) + ": n must be positive");
  if (n >= 5) throw std::out_of_range(std::string(what) + ": n >= 5 is outside the supported range");
  if (n == 4 && !opts.allow_large)
    throw std::out_of_range(std::string(what) + ": n = 4 is expensive and must be requested explicitly");
}

inline std::size_t residual(const WeylElement& lhs, const WeylElement& rhs) { return (lhs - rhs).size(); }
inline std::size_t residual(const Polynomial& lhs, const Polynomial& rhs) { return (lhs - rhs).size(); }

inline VerificationReport make_report(std::string identity, int n, std::size_t residual_terms,
                                      const Stopwatch& clock) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.n = n;
  r.residual_terms = residual_terms;
  r.passed = residual_terms == 0;
  r.elapsed_ms = clock.elapsed_ms();
  return r;
}

/// det of the rows x |cols| submatrix of x (or of d/dx when derivative), as an operator.
inline WeylElement grid_determinant(Grid grid, int rows, const std::vector<int>& cols, bool derivative) {
  PolynomialMatrix m(static_cast<std::size_t>(rows));
  for (int i = 1; i <= rows; ++i) {
    for (int j : cols) {
      const auto family = derivative ? Family::Y : Family::X;
      const int weight = (derivative && grid == Grid::symmetric && i == j) ? 2 : 1;
      m[i - 1].push_back(Polynomial::variable(VarId::make(family, grid, i, j)) * Polynomial(weight));
    }
  }
  return operatorize(det(m), OperatorizeMode::normal);
}

inline std::vector<int> iota_cols(int n) {
  std::vector<int> cols;
  for (int k = 1; k <= n; ++k) cols.push_back(k);
  return cols;
}

inline Integer rising_factorial(int s, int n) {
  Integer r = 1;
  for (int k = 0; k < n; ++k) r *= (s + k);
  return r;
}

}  // namespace detail

/// det(x) as a multiplication operator on the n x n grid.
inline WeylElement x_determinant(int n, Grid grid = Grid::standard) {
  return detail::grid_determinant(grid, n, detail::iota_cols(n), false);
}

/// det(d/dx) on the standard grid, or det((1 + delta_jk) d/dxs_jk) on the symmetric grid.
inline WeylElement derivative_determinant(int n, Grid grid = Grid::standard) {
  return detail::grid_determinant(grid, n, detail::iota_cols(n), true);
}

/// det(x) as a polynomial.
inline Polynomial x_determinant_polynomial(int n) {
  return det(variable_matrix(Family::X, Grid::standard, n, n));
}

// ---------------------------------------------------------------------------
// Capelli

inline WeylElement capelli_lhs(int n, int offset_perturbation = 0) {
  auto a = OperatorMatrix::build(n, [&](int i, int j) {
    WeylElement e = generator(GeneratorKind::D, n, i, j);
    if (i == j) e += WeylElement(n - i + (i == 1 ? offset_perturbation : 0));
    return e;
  });
  return column_det(a);
}

inline WeylElement capelli_rhs(int n) { return x_determinant(n) * derivative_determinant(n); }

inline VerificationReport verify_capelli(int n, const VerifyOptions& opts = {}) {
  detail::check_size(n, opts, "verify_capelli");
  detail::Stopwatch clock;
  const auto r = detail::residual(capelli_lhs(n, opts.offset_perturbation), capelli_rhs(n));
  return detail::make_report("capelli", n, r, clock);
}

// ---------------------------------------------------------------------------
// Fiber recursion

struct OperatorVariant {
  OperatorizeMode mode;
  UnitValue unit;
};

inline constexpr OperatorVariant kNormalVariant{OperatorizeMode::normal, UnitValue::plus_one};
inline constexpr OperatorVariant kDualVariant{OperatorizeMode::dual, UnitValue::minus_one};

/// Residual of the fiber equation at one target:
///   sign(t) op(t, m+1) = sum over fiber(t, m) of sign(c) op(c, m).
inline std::size_t fiber_equation_residual(const CapelliConfig& target, int m, Grid grid, OperatorVariant v) {
  WeylElement lhs = config_operator(target, m + 1, grid, v.mode, v.unit) * WeylElement(sign(target.sigma()));
  WeylElement rhs;
  for (const auto& c : fiber(target, m))
    rhs += config_operator(c, m, grid, v.mode, v.unit) * WeylElement(sign(c.sigma()));
  return detail::residual(lhs, rhs);
}

/// Fiber equation for every m in [1, n] and every target in C^{m+1}, for each variant.
inline VerificationReport verify_theorem1(int n, const std::vector<OperatorVariant>& variants =
                                                     {kNormalVariant, kDualVariant},
                                          const VerifyOptions& opts = {}) {
  detail::check_size(n, opts, "verify_theorem1");
  detail::Stopwatch clock;
  std::size_t r = 0;
  for (const auto& v : variants)
    for (int m = 1; m <= n; ++m)
      for (const auto& target : enumerate_configs(n, m + 1)) r += fiber_equation_residual(target, m, Grid::standard, v);
  return detail::make_report("theorem1", n, r, clock);
}

/// sum over C^m of sign(sigma) op(c, m).
inline WeylElement signed_class_sum(int n, int m, Grid grid, OperatorVariant v) {
  WeylElement out;
  for (const auto& c : enumerate_configs(n, m))
    out += config_operator(c, m, grid, v.mode, v.unit) * WeylElement(sign(c.sigma()));
  return out;
}

// ---------------------------------------------------------------------------
// Capelli-Cauchy-Binet on the m x n grid

inline WeylElement cauchy_binet_lhs(int n, int m, const Convention& conv, int offset_perturbation = 0) {
  auto a = OperatorMatrix::build(m, [&](int i, int j) {
    WeylElement e = polarization(m, n, i, j);
    if (i == j) e += WeylElement(conv.offset(i, n, m) + (i == 1 ? offset_perturbation : 0));
    return e;
  });
  return column_det(a, conv.column_order(m));
}

/// sum over m-subsets I of columns of det(x_I) det(d_I).
inline WeylElement cauchy_binet_rhs(int n, int m) {
  WeylElement out;
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  std::fill(chosen.begin(), chosen.begin() + m, true);
  do {
    std::vector<int> cols;
    for (int k = 1; k <= n; ++k)
      if (chosen[k - 1]) cols.push_back(k);
    out += detail::grid_determinant(Grid::standard, m, cols, false) *
           detail::grid_determinant(Grid::standard, m, cols, true);
  } while (std::prev_permutation(chosen.begin(), chosen.end()));
  return out;
}

inline constexpr Convention kCauchyBinetConvention{OffsetFamily::m_minus_i, +1, OrderKind::natural};

inline VerificationReport verify_cauchy_binet(int n, int m, const Convention& conv = kCauchyBinetConvention,
                                              const VerifyOptions& opts = {}) {
  detail::check_size(n, opts, "verify_cauchy_binet");
  if (m < 1 || m >= n) throw std::out_of_range("verify_cauchy_binet: requires 1 <= m < n");
  detail::Stopwatch clock;
  const auto r = detail::residual(cauchy_binet_lhs(n, m, conv, opts.offset_perturbation), cauchy_binet_rhs(n, m));
  auto report = detail::make_report("cauchy_binet", n, r, clock);
  report.m = m;
  report.pinned_convention = conv.describe();
  return report;
}

// ---------------------------------------------------------------------------
// Turnbull (symmetric grid)

inline WeylElement turnbull_lhs(int n, const Convention& conv, int offset_perturbation = 0) {
  auto a = OperatorMatrix::build(n, [&](int i, int j) {
    WeylElement e = generator(GeneratorKind::S, n, i, j);
    if (i == j) e += WeylElement(conv.offset(i, n, n) + (i == 1 ? offset_perturbation : 0));
    return e;
  });
  return column_det(a, conv.column_order(n));
}

inline WeylElement turnbull_rhs(int n) {
  return x_determinant(n, Grid::symmetric) * derivative_determinant(n, Grid::symmetric);
}

inline VerificationReport verify_turnbull(int n, const Convention& conv, const VerifyOptions& opts = {}) {
  detail::check_size(n, opts, "verify_turnbull");
  detail::Stopwatch clock;
  const auto r = detail::residual(turnbull_lhs(n, conv, opts.offset_perturbation), turnbull_rhs(n));
  auto report = detail::make_report("turnbull", n, r, clock);
  report.pinned_convention = conv.describe();
  return report;
}

/// Summed recursion on the symmetric grid for every m in [1, n]:
///   sum over C^{m+1} of sign op(., m+1) = sum over C^m of sign op(., m).
inline VerificationReport verify_turnbull_lemma(int n, const VerifyOptions& opts = {}) {
  detail::check_size(n, opts, "verify_turnbull_lemma");
  detail::Stopwatch clock;
  std::size_t r = 0;
  for (int m = 1; m <= n; ++m)
    r += detail::residual(signed_class_sum(n, m + 1, Grid::symmetric, kNormalVariant),
                          signed_class_sum(n, m, Grid::symmetric, kNormalVariant));
  return detail::make_report("turnbull_lemma", n, r, clock);
}

// ---------------------------------------------------------------------------
// Cayley and dual Capelli

inline VerificationReport verify_cayley(int n, int s, const VerifyOptions& opts = {}) {
  detail::check_size(n, opts, "verify_cayley");
  if (s < 1) throw std::out_of_range("verify_cayley: s must be positive");
  detail::Stopwatch clock;
  const Polynomial det_x = x_determinant_polynomial(n);
  const Polynomial lhs = apply(derivative_determinant(n), pow(det_x, static_cast<unsigned>(s)));
  const Polynomial rhs = pow(det_x, static_cast<unsigned>(s - 1)) * Polynomial(detail::rising_factorial(s, n));
  auto report = detail::make_report("cayley", n, detail::residual(lhs, rhs), clock);
  report.s = s;
  return report;
}

inline WeylElement dual_capelli_lhs(int n, const Convention& conv, int offset_perturbation = 0) {
  auto a = OperatorMatrix::build(n, [&](int i, int j) {
    WeylElement e = generator(GeneratorKind::d, n, i, j);
    if (i == j) e += WeylElement(conv.offset(i, n, n) + (i == 1 ? offset_perturbation : 0));
    return e;
  });
  return column_det(a, conv.column_order(n));
}

/// det(d/dx) composed to the left of det(x).
inline WeylElement dual_capelli_rhs(int n) { return derivative_determinant(n) * x_determinant(n); }

/// Operator identity plus the diagonal action on det(x)^(s-1), s = 1..3.
inline VerificationReport verify_dual_capelli(int n, const Convention& conv, const VerifyOptions& opts = {}) {
  detail::check_size(n, opts, "verify_dual_capelli");
  detail::Stopwatch clock;
  const WeylElement lhs = dual_capelli_lhs(n, conv, opts.offset_perturbation);
  std::size_t r = detail::residual(lhs, dual_capelli_rhs(n));
  const Polynomial det_x = x_determinant_polynomial(n);
  for (int s = 1; s <= 3; ++s) {
    const Polynomial power = pow(det_x, static_cast<unsigned>(s - 1));
    r += detail::residual(apply(lhs, power), power * Polynomial(detail::rising_factorial(s, n)));
  }
  auto report = detail::make_report("dual_capelli", n, r, clock);
  report.pinned_convention = conv.describe();
  return report;
}

// ---------------------------------------------------------------------------
// Convention pinning

/// Identities whose left-hand conventions are resolved by search.
inline bool is_pinnable(std::string_view identity) {
  return identity == "cauchy_binet" || identity == "turnbull" || identity == "dual_capelli";
}

struct PinnedConvention {
  std::string identity;
  int n = 0;
  std::optional<int> m;
  Convention convention;
  std::vector<int> offset_values;

  friend bool operator==(const PinnedConvention&, const PinnedConvention&) = default;
};

namespace detail {

inline bool candidate_holds(std::string_view identity, int n, int m, const Convention& conv) {
  const VerifyOptions opts{.allow_large = true};
  if (identity == "cauchy_binet") return verify_cauchy_binet(n, m, conv, opts).passed;
  if (identity == "turnbull") return verify_turnbull(n, conv, opts).passed;
  return verify_dual_capelli(n, conv, opts).passed;
}

}  // namespace detail

/// Exhaustive search over offset families {m-i, n-i, i-1, 0}, signs {+, -} and
/// column orders {natural, reversed}. Candidates giving the same matrix and order are
/// tried once. A candidate and its index-reversal mirror (opposite order, offsets
/// read bottom to top) state the same identity up to relabeling i <-> size+1-i, so
/// survivors are counted per mirror class; the natural-order member is returned.
/// Throws std::runtime_error unless exactly one class survives.
inline PinnedConvention pin_convention(std::string_view identity, int n, std::optional<int> m = std::nullopt) {
  if (!is_pinnable(identity)) throw std::invalid_argument("no convention to pin for '" + std::string(identity) + "'");
  const bool rectangular = identity == "cauchy_binet";
  if (rectangular && !m) throw std::invalid_argument("pin_convention: cauchy_binet needs m");
  const int rows = rectangular ? *m : n;
  const int mm = rectangular ? *m : n;

  using Key = std::pair<OrderKind, std::vector<int>>;
  std::vector<std::pair<Key, Convention>> survivors;
  std::vector<Key> tried;
  std::vector<OffsetFamily> families{OffsetFamily::n_minus_i, OffsetFamily::i_minus_1, OffsetFamily::zero};
  // Without a separate m the family m-i coincides with n-i.
  if (rectangular) families.insert(families.begin(), OffsetFamily::m_minus_i);
  for (auto order : {OrderKind::natural, OrderKind::reversed}) {
    for (auto family : families) {
      for (int sgn : {+1, -1}) {
        const Convention conv{family, sgn, order};
        Key key{order, conv.offsets(rows, n, mm)};
        if (std::find(tried.begin(), tried.end(), key) != tried.end()) continue;
        tried.push_back(key);
        if (detail::candidate_holds(identity, n, mm, conv)) survivors.emplace_back(std::move(key), conv);
      }
    }
  }

  auto mirror = [](const Key& k) {
    Key out{k.first == OrderKind::natural ? OrderKind::reversed : OrderKind::natural, k.second};
    std::reverse(out.second.begin(), out.second.end());
    return out;
  };
  std::vector<Key> classes;
  for (const auto& [key, conv] : survivors) {
    const Key canonical = key.first == OrderKind::natural ? key : mirror(key);
    if (std::find(classes.begin(), classes.end(), canonical) == classes.end()) classes.push_back(canonical);
  }
  const std::string where = std::string(identity) + " at n=" + std::to_string(n) +
                            (rectangular ? ", m=" + std::to_string(*m) : std::string());
  if (classes.empty()) throw std::runtime_error("pin_convention: no candidate convention holds for " + where);
  if (classes.size() > 1)
    throw std::runtime_error("pin_convention: " + std::to_string(classes.size()) +
                             " inequivalent conventions hold for " + where);

  const auto* chosen = &survivors.front();
  for (const auto& s : survivors)
    if (s.first.first == OrderKind::natural) {
      chosen = &s;
      break;
    }
  PinnedConvention out;
  out.identity = std::string(identity);
  out.n = n;
  out.m = rectangular ? m : std::nullopt;
  out.convention = chosen->second;
  out.offset_values = chosen->first.second;
  return out;
}

/// Smallest size at which each pinnable identity discriminates its candidates.
inline PinnedConvention pin_minimal(std::string_view identity) {
  if (identity == "cauchy_binet") return pin_convention(identity, 3, 2);
  return pin_convention(identity, 2);
}

inline nlohmann::ordered_json to_json(const PinnedConvention& p) {
  nlohmann::ordered_json j;
  j["identity"] = p.identity;
  j["n"] = p.n;
  j["m"] = p.m ? nlohmann::ordered_json(*p.m) : nullptr;
  j["offset_family"] = to_string(p.convention.family);
  j["offset_sign"] = p.convention.offset_sign > 0 ? "+" : "-";
  j["column_order"] = p.convention.order == OrderKind::natural ? "natural" : "reversed";
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < p.offset_values.size(); ++i) values[std::to_string(i + 1)] = p.offset_values[i];
  j["offset_values"] = values;
  return j;
}

inline PinnedConvention pinned_from_json(const nlohmann::json& j) {
  try {
    PinnedConvention p;
    p.identity = j.at("identity").get<std::string>();
    p.n = j.at("n").get<int>();
    if (!j.at("m").is_null()) p.m = j.at("m").get<int>();
    p.convention.family = offset_family_from_string(j.at("offset_family").get<std::string>());
    const auto sign = j.at("offset_sign").get<std::string>();
    if (sign != "+" && sign != "-") throw std::invalid_argument("offset_sign must be '+' or '-'");
    p.convention.offset_sign = sign == "+" ? 1 : -1;
    const auto order = j.at("column_order").get<std::string>();
    if (order != "natural" && order != "reversed") throw std::invalid_argument("unknown column_order");
    p.convention.order = order == "natural" ? OrderKind::natural : OrderKind::reversed;
    const auto& values = j.at("offset_values");
    for (std::size_t i = 1; i <= values.size(); ++i) p.offset_values.push_back(values.at(std::to_string(i)).get<int>());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed convention ledger entry: ") + e.what());
  }
}

/// Persistent list of pinned conventions, one per identity.
class ConventionLedger {
 public:
  ConventionLedger() = default;

  /// Missing file yields an empty ledger.
  static ConventionLedger load(const std::string& path) {
    ConventionLedger ledger;
    std::ifstream in(path);
    if (!in) return ledger;
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("convention ledger " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_array()) throw std::invalid_argument("convention ledger " + path + " must be a JSON array");
    for (const auto& entry : j) ledger.put(pinned_from_json(entry));
    return ledger;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write convention ledger " + path);
    out << to_json().dump(2) << '\n';
  }

  [[nodiscard]] nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& e : entries_) j.push_back(capelli::to_json(e));
    return j;
  }

  void put(PinnedConvention p) {
    for (auto& e : entries_)
      if (e.identity == p.identity) {
        e = std::move(p);
        return;
      }
    entries_.push_back(std::move(p));
  }

  [[nodiscard]] std::optional<PinnedConvention> find(std::string_view identity) const {
    for (const auto& e : entries_)
      if (e.identity == identity) return e;
    return std::nullopt;
  }

  /// Ledger entry if present, otherwise pinned now at the minimal size and recorded.
  Convention resolve(std::string_view identity) {
    if (auto hit = find(identity)) return hit->convention;
    auto pinned = pin_minimal(identity);
    put(pinned);
    return pinned.convention;
  }

  [[nodiscard]] const std::vector<PinnedConvention>& entries() const { return entries_; }

 private:
  std::vector<PinnedConvention> entries_;
};

}  // namespace capelli
