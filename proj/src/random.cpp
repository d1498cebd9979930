// SPDX-License-Identifier: MIT
#include "tucker/random.hpp"

#include <random>

namespace tucker {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void fill_standard_normal(std::span<double> out, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : out) v = normal(gen);
}

Matrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Matrix m(rows, cols);
    fill_standard_normal({m.data(), static_cast<std::size_t>(m.size())}, seed);
    return m;
}

DenseTensor standard_normal_tensor(const Dims& dims, std::uint64_t seed) {
    DenseTensor t(dims);
    fill_standard_normal(t.mutable_data(), seed);
    return t;
}

} // namespace tucker
