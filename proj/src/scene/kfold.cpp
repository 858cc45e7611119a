#include "ssc/scene/kfold.hpp"

#include <algorithm>
#include <numeric>

#include "ssc/errors.hpp"
#include "ssc/rng.hpp"

namespace ssc::scene {

std::vector<Fold> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || n < k) {
    throw ConfigError("k-fold split needs 2 <= k <= n, got k=" + std::to_string(k) +
                      " n=" + std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());

  std::vector<Fold> folds(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t begin = 0;
  std::vector<std::size_t> fold_of(n);
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].test.assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                         order.begin() + static_cast<std::ptrdiff_t>(begin + size));
    std::sort(folds[f].test.begin(), folds[f].test.end());
    for (std::size_t idx : folds[f].test) fold_of[idx] = f;
    begin += size;
  }
  for (std::size_t f = 0; f < k; ++f) {
    folds[f].train.reserve(n - folds[f].test.size());
    for (std::size_t idx = 0; idx < n; ++idx) {
      if (fold_of[idx] != f) folds[f].train.push_back(idx);
    }
  }
  return folds;
}

}  // namespace ssc::scene
