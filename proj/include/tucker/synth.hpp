// SPDX-License-Identifier: MIT
#pragma once

#include "tucker/model.hpp"

#include <cstdint>

namespace tucker {

enum class SynthKind { lowrank, noisy };

struct SynthSpec {
    Dims dims;
    Dims ranks;
    SynthKind kind = SynthKind::lowrank;
    double noise = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Random Tucker model: iid N(0,1) core and random_stiefel factors, each
/// drawn from its own stream derived from spec.seed.
[[nodiscard]] TuckerModel lowrank_model(const SynthSpec& spec);

/// reconstruct(lowrank_model(spec)); multilinear rank equals spec.ranks almost surely.
[[nodiscard]] DenseTensor gen_lowrank(const SynthSpec& spec);

/// L / ||L|| + noise * N / ||N|| with L = gen_lowrank(spec) and N iid N(0,1).
[[nodiscard]] DenseTensor gen_noisy(const SynthSpec& spec);

/// Dispatches on spec.kind.
[[nodiscard]] DenseTensor generate(const SynthSpec& spec);

} // namespace tucker
