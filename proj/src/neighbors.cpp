#include "absorbkit/neighbors.hpp"

#include <algorithm>
#include <utility>

#include "absorbkit/parallel.hpp"

namespace absorbkit {

double squared_distance(const Dataset& dataset, std::size_t i, std::size_t j) {
  const auto& m = dataset.values;
  double sum = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double diff = m(static_cast<Eigen::Index>(i), c) - m(static_cast<Eigen::Index>(j), c);
    sum += diff * diff;
  }
  return sum;
}

NeighborhoodIndex build_index(const Dataset& dataset, std::size_t k) {
  const std::size_t n = dataset.n();
  if (k < 1 || k >= n) {
    throw KTooLarge(k, n);
  }

  NeighborhoodIndex index;
  index.k = k;
  index.neighbors.assign(n, {});

  // Exact search: all-pairs distances with a partial sort per query point.
  // Ordering key is (distance, index), so ties resolve by ascending index.
  parallel_for(n, [&](std::size_t i) {
    std::vector<std::pair<double, std::size_t>> candidates;
    candidates.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;  // self excluded
      candidates.emplace_back(squared_distance(dataset, i, j), j);
    }
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                      candidates.end());
    auto& list = index.neighbors[i];
    list.resize(k);
    for (std::size_t r = 0; r < k; ++r) list[r] = candidates[r].second;
  });

  return index;
}

const std::vector<std::size_t>& neighbors_of(const NeighborhoodIndex& index, std::size_t i) {
  if (i >= index.n()) {
    throw IndexOutOfRange(i, index.n());
  }
  return index.neighbors[i];
}

}  // namespace absorbkit
