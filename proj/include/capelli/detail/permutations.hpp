#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace capelli::detail {

/// Parity of a zero-based one-line permutation by inversion count.
inline int inversion_sign(const std::vector<int>& image) {
  int inversions = 0;
  for (std::size_t a = 0; a < image.size(); ++a)
    for (std::size_t b = a + 1; b < image.size(); ++b)
      if (image[a] > image[b]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

/// Calls visit(image, sign) for every permutation of {0..n-1} in lexicographic order.
template <typename Visitor>
void for_each_permutation(int n, Visitor&& visit) {
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  do {
    visit(static_cast<const std::vector<int>&>(image), inversion_sign(image));
  } while (std::next_permutation(image.begin(), image.end()));
}

}  // namespace capelli::detail
