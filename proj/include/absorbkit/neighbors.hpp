#pragma once

#include <cstddef>
#include <vector>

#include "absorbkit/types.hpp"

namespace absorbkit {

//! Squared Euclidean distance between rows i and j, accumulated in column
//! order. Tests that need bit-identical tie-breaking reuse this routine.
double squared_distance(const Dataset& dataset, std::size_t i, std::size_t j);

//! Exact k-nearest-neighbor index under Euclidean distance, self excluded,
//! ties broken by ascending sample index. Construction parallelizes over
//! query points.
NeighborhoodIndex build_index(const Dataset& dataset, std::size_t k);

//! The neighbor list of sample i.
const std::vector<std::size_t>& neighbors_of(const NeighborhoodIndex& index, std::size_t i);

}  // namespace absorbkit
