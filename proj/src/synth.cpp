// SPDX-License-Identifier: MIT
#include "tucker/synth.hpp"

#include "tucker/errors.hpp"
#include "tucker/manifold.hpp"
#include "tucker/random.hpp"

#include <cmath>
#include <string>

namespace tucker {

namespace {

// Stream ids for derive_seed: core, factors 1..d, then noise.
constexpr std::uint64_t kCoreStream = 0;
constexpr std::uint64_t kNoiseStream = 1u << 20;

} // namespace

void SynthSpec::validate() const {
    if (dims.empty()) throw ShapeError("synth: dims must be non-empty");
    if (ranks.size() != dims.size()) throw ShapeError("synth: ranks and dims differ in length");
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (ranks[i] < 1 || ranks[i] > dims[i])
            throw ShapeError("synth: rank " + std::to_string(ranks[i]) + " of mode " +
                             std::to_string(i + 1) + " must lie in [1, " + std::to_string(dims[i]) + "]");
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw ShapeError("synth: noise must be >= 0");
}

TuckerModel lowrank_model(const SynthSpec& spec) {
    spec.validate();
    TuckerModel m;
    m.core = standard_normal_tensor(spec.ranks, derive_seed(spec.seed, kCoreStream));
    for (std::size_t i = 0; i < spec.dims.size(); ++i)
        m.factors.push_back(random_stiefel(static_cast<Eigen::Index>(spec.dims[i]),
                                           static_cast<Eigen::Index>(spec.ranks[i]),
                                           derive_seed(spec.seed, i + 1))
                                .matrix());
    return m;
}

DenseTensor gen_lowrank(const SynthSpec& spec) { return reconstruct(lowrank_model(spec)); }

DenseTensor gen_noisy(const SynthSpec& spec) {
    DenseTensor out = gen_lowrank(spec);
    const double nl = frobenius_norm(out);
    if (nl == 0.0) throw NumericError("synth: degenerate low-rank draw with zero norm");
    auto data = out.mutable_data();
    for (double& v : data) v /= nl;
    if (spec.noise == 0.0) return out;

    // A zero-norm noise draw has probability zero; retry once on a fresh stream.
    for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
        const DenseTensor noise = standard_normal_tensor(spec.dims, derive_seed(spec.seed, kNoiseStream + attempt));
        const double nn = frobenius_norm(noise);
        if (nn == 0.0) continue;
        const double scale = spec.noise / nn;
        const auto nd = noise.data();
        for (std::size_t k = 0; k < data.size(); ++k) data[k] += scale * nd[k];
        return out;
    }
    throw NumericError("synth: degenerate noise draw with zero norm");
}

DenseTensor generate(const SynthSpec& spec) {
    return spec.kind == SynthKind::lowrank ? gen_lowrank(spec) : gen_noisy(spec);
}

} // namespace tucker
