// SPDX-License-Identifier: MIT
#pragma once

#include "tucker/tensor.hpp"

#include <cstdint>

namespace tucker {

/// SplitMix64 finalizer applied to seed + golden-ratio * (stream + 1).
///
/// Gives statistically independent seeds for the separate random streams of
/// one experiment (core, each factor, noise) from a single user seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Fills `out` with iid N(0,1) variates from std::mt19937_64(seed) through
/// std::normal_distribution. Reproducible for a given standard library.
void fill_standard_normal(std::span<double> out, std::uint64_t seed);

[[nodiscard]] Matrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

[[nodiscard]] DenseTensor standard_normal_tensor(const Dims& dims, std::uint64_t seed);

} // namespace tucker
