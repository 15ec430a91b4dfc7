#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace capelli {

/// Bijection on {1..n}, stored in one-line notation.
class Permutation {
 public:
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    const auto n = static_cast<int>(image_.size());
    if (n < 1) throw std::invalid_argument("permutation must act on at least one point");
    std::vector<bool> seen(image_.size(), false);
    for (int v : image_) {
      if (v < 1 || v > n || seen[v - 1]) throw std::invalid_argument("permutation image is not a bijection");
      seen[v - 1] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> image(static_cast<std::size_t>(n));
    std::iota(image.begin(), image.end(), 1);
    return Permutation(std::move(image));
  }

  /// Product of disjoint cycles, e.g. from_cycles(8, {{1, 2, 5, 8, 3}}).
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> image(static_cast<std::size_t>(n));
    std::iota(image.begin(), image.end(), 1);
    for (const auto& cycle : cycles)
      for (std::size_t k = 0; k < cycle.size(); ++k) image.at(cycle[k] - 1) = cycle[(k + 1) % cycle.size()];
    return Permutation(std::move(image));
  }

  [[nodiscard]] int n() const { return static_cast<int>(image_.size()); }
  [[nodiscard]] int operator()(int i) const { return image_.at(static_cast<std::size_t>(i - 1)); }
  [[nodiscard]] const std::vector<int>& image() const { return image_; }

  [[nodiscard]] int preimage(int v) const {
    auto it = std::find(image_.begin(), image_.end(), v);
    return static_cast<int>(it - image_.begin()) + 1;
  }

  [[nodiscard]] bool fixes(int i) const { return (*this)(i) == i; }

  [[nodiscard]] std::vector<int> fixed_points() const {
    std::vector<int> out;
    for (int i = 1; i <= n(); ++i)
      if (fixes(i)) out.push_back(i);
    return out;
  }

  /// Copy with the given positions reassigned.
  [[nodiscard]] Permutation with(std::initializer_list<std::pair<int, int>> assignments) const {
    std::vector<int> image = image_;
    for (const auto& [i, v] : assignments) image.at(static_cast<std::size_t>(i - 1)) = v;
    return Permutation(std::move(image));
  }

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

/// (-1)^sigma, by cycle decomposition.
inline int sign(const Permutation& p) {
  std::vector<bool> visited(static_cast<std::size_t>(p.n()), false);
  int parity = 0;
  for (int start = 1; start <= p.n(); ++start) {
    if (visited[start - 1]) continue;
    int length = 0;
    for (int i = start; !visited[i - 1]; i = p(i)) {
      visited[i - 1] = true;
      ++length;
    }
    parity += length - 1;
  }
  return parity % 2 == 0 ? 1 : -1;
}

/// Capelli configuration (sigma, phi): phi is defined exactly on the fixed points
/// of sigma, with 1 <= phi(i) <= i.
class CapelliConfig {
 public:
  CapelliConfig(Permutation sigma, std::map<int, int> phi) : sigma_(std::move(sigma)), phi_(std::move(phi)) {
    for (const auto& [i, v] : phi_) {
      if (i < 1 || i > sigma_.n() || !sigma_.fixes(i))
        throw std::invalid_argument("phi is defined at " + std::to_string(i) + ", which sigma does not fix");
      if (v < 1 || v > i)
        throw std::invalid_argument("phi(" + std::to_string(i) + ") must lie in 1.." + std::to_string(i));
    }
    for (int i : sigma_.fixed_points())
      if (!phi_.contains(i)) throw std::invalid_argument("phi is undefined at fixed point " + std::to_string(i));
  }

  /// The configuration of C with phi the identity on Fix(sigma).
  static CapelliConfig canonical(Permutation sigma) {
    std::map<int, int> phi;
    for (int i : sigma.fixed_points()) phi.emplace(i, i);
    return CapelliConfig(std::move(sigma), std::move(phi));
  }

  [[nodiscard]] int n() const { return sigma_.n(); }
  [[nodiscard]] const Permutation& sigma() const { return sigma_; }
  [[nodiscard]] const std::map<int, int>& phi() const { return phi_; }

  /// Fixed point whose phi arrow leaves it (phi(i) < i).
  [[nodiscard]] bool deficient(int i) const {
    auto it = phi_.find(i);
    return it != phi_.end() && it->second < i;
  }

  auto operator<=>(const CapelliConfig&) const = default;

 private:
  Permutation sigma_;
  std::map<int, int> phi_;
};

namespace detail {

inline void check_range(int m, int lo, int hi, const char* what) {
  if (m < lo || m > hi)
    throw std::out_of_range(std::string(what) + ": m=" + std::to_string(m) + " outside [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
}

}  // namespace detail

/// Membership in C^m: every deficient fixed point k satisfies k >= m.
inline bool in_class(const CapelliConfig& c, int m) {
  detail::check_range(m, 1, c.n() + 1, "in_class");
  for (const auto& [k, v] : c.phi())
    if (v < k && k < m) return false;
  return true;
}

/// All of C^m: permutations in lexicographic one-line order, then phi in
/// mixed-radix order with the largest fixed point varying fastest.
inline std::vector<CapelliConfig> enumerate_configs(int n, int m) {
  if (n < 1) throw std::out_of_range("enumerate_configs: n must be positive");
  detail::check_range(m, 1, n + 1, "enumerate_configs");
  std::vector<CapelliConfig> out;
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 1);
  do {
    Permutation sigma(image);
    const auto fixed = sigma.fixed_points();
    // Fixed points below m are pinned to phi(i) = i; the rest range over 1..i.
    std::vector<int> digit(fixed.size());
    for (std::size_t t = 0; t < fixed.size(); ++t) digit[t] = fixed[t] < m ? fixed[t] : 1;
    bool more = true;
    while (more) {
      std::map<int, int> phi;
      for (std::size_t t = 0; t < fixed.size(); ++t) phi.emplace(fixed[t], digit[t]);
      out.emplace_back(sigma, std::move(phi));
      more = false;
      for (std::size_t t = fixed.size(); t-- > 0;) {
        if (fixed[t] < m) continue;
        if (digit[t] < fixed[t]) {
          ++digit[t];
          more = true;
          break;
        }
        digit[t] = 1;
      }
    }
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

/// |C^m| = sum over sigma of prod_{i in Fix sigma, i >= m} i.
inline long long class_size(int n, int m) {
  detail::check_range(m, 1, n + 1, "class_size");
  long long total = 0;
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 1);
  do {
    long long product = 1;
    for (int i = 1; i <= n; ++i)
      if (image[i - 1] == i && i >= m) product *= i;
    total += product;
  } while (std::next_permutation(image.begin(), image.end()));
  return total;
}

/// One step of the splicing algorithm, C^m -> C^{m+1}. A deficient fixed point m
/// with phi(m) = a is spliced into sigma as a -> m -> sigma(a); otherwise the
/// configuration passes through unchanged.
inline CapelliConfig lambda_step(const CapelliConfig& c, int m) {
  detail::check_range(m, 1, c.n(), "lambda_step");
  if (!in_class(c, m)) throw std::invalid_argument("lambda_step: configuration is not in C^" + std::to_string(m));
  const auto& sigma = c.sigma();
  if (!sigma.fixes(m) || !c.deficient(m)) return c;
  const int a = c.phi().at(m);
  Permutation spliced = sigma.with({{a, m}, {m, sigma(a)}});
  std::map<int, int> phi;
  for (const auto& [i, v] : c.phi())
    if (spliced.fixes(i)) phi.emplace(i, v);
  return CapelliConfig(std::move(spliced), std::move(phi));
}

/// Full algorithm: steps 1..n, landing in C = C^{n+1}.
inline CapelliConfig lambda_full(const CapelliConfig& c) {
  CapelliConfig out = c;
  for (int m = 1; m <= c.n(); ++m) out = lambda_step(out, m);
  return out;
}

/// Intermediate configurations of the full algorithm: trace[m-1] is the input of step m,
/// trace[n] the final result.
inline std::vector<CapelliConfig> lambda_trace(const CapelliConfig& c) {
  std::vector<CapelliConfig> trace{c};
  for (int m = 1; m <= c.n(); ++m) trace.push_back(lambda_step(trace.back(), m));
  return trace;
}

/// Preimages of target under lambda_step(., m). The target itself is always one;
/// a second exists iff sigma^{-1}(m) < m.
inline std::vector<CapelliConfig> fiber(const CapelliConfig& target, int m) {
  detail::check_range(m, 1, target.n(), "fiber");
  if (!in_class(target, m + 1))
    throw std::invalid_argument("fiber: target is not in C^" + std::to_string(m + 1));
  std::vector<CapelliConfig> out{target};
  const auto& sigma = target.sigma();
  const int i = sigma.preimage(m);
  if (i < m) {
    Permutation unspliced = sigma.with({{i, sigma(m)}, {m, m}});
    std::map<int, int> phi = target.phi();
    phi[m] = i;
    if (unspliced.fixes(i)) phi[i] = i;
    out.emplace_back(std::move(unspliced), std::move(phi));
  }
  return out;
}

/// Sign-reversing involution on C^{m+1} (m >= 2): swaps the values of sigma at
/// positions 1 and m, sets phi to the identity on Fix(D sigma) within {1..m} and
/// keeps phi on fixed points above m.
inline CapelliConfig involution(const CapelliConfig& c, int m) {
  if (m < 2) throw std::out_of_range("involution: m must be at least 2");
  detail::check_range(m, 2, c.n(), "involution");
  if (!in_class(c, m + 1)) throw std::invalid_argument("involution: configuration is not in C^" + std::to_string(m + 1));
  const auto& sigma = c.sigma();
  Permutation swapped = sigma.with({{1, sigma(m)}, {m, sigma(1)}});
  std::map<int, int> phi;
  for (int i : swapped.fixed_points()) phi.emplace(i, i <= m ? i : c.phi().at(i));
  return CapelliConfig(std::move(swapped), std::move(phi));
}

inline nlohmann::json to_json(const CapelliConfig& c) {
  nlohmann::json phi = nlohmann::json::object();
  for (const auto& [i, v] : c.phi()) phi[std::to_string(i)] = v;
  return {{"n", c.n()}, {"sigma", c.sigma().image()}, {"phi", phi}};
}

/// Reads {"n":..,"sigma":[..],"phi":{"i":v,..}}; throws std::invalid_argument when malformed.
inline CapelliConfig config_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    auto image = j.at("sigma").get<std::vector<int>>();
    if (static_cast<int>(image.size()) != n) throw std::invalid_argument("sigma length does not match n");
    std::map<int, int> phi;
    for (const auto& [key, value] : j.at("phi").items()) {
      std::size_t used = 0;
      const int i = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument("phi key '" + key + "' is not an integer");
      phi.emplace(i, value.get<int>());
    }
    return CapelliConfig(Permutation(std::move(image)), std::move(phi));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed configuration JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw std::invalid_argument(std::string("malformed configuration: ") + e.what());
  }
}

/// Two-line ASCII picture: the index line, then one arrow per point.
/// Moved points render as i->sigma(i); fixed points as i->i when phi(i) = i and
/// i=>phi(i) otherwise.
inline std::string diagram(const CapelliConfig& c) {
  std::string indices;
  std::string arrows;
  for (int i = 1; i <= c.n(); ++i) {
    if (i > 1) {
      indices += ' ';
      arrows += ' ';
    }
    indices += std::to_string(i);
    if (c.deficient(i))
      arrows += std::to_string(i) + "=>" + std::to_string(c.phi().at(i));
    else
      arrows += std::to_string(i) + "->" + std::to_string(c.sigma()(i));
  }
  return indices + '\n' + arrows + '\n';
}

}  // namespace capelli
