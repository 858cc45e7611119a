#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ssc::scene {

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Shuffles 0..n-1 with `seed` and cuts it into k contiguous folds whose
// sizes differ by at most one (the first n % k folds get the extra sample).
// Fold i tests on its own indices and trains on the rest. Requires 2 <= k <= n.
std::vector<Fold> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace ssc::scene
