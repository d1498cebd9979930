// SPDX-License-Identifier: MIT
#pragma once

#include "tucker/algorithms.hpp"
#include "tucker/model.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace tucker::io {

/// DTEN layout, all little-endian:
///   "DTEN" | u32 version (=1) | u32 order | order x u64 dims | prod(dims) x f64 payload
/// with the payload in first-index-fastest order.
inline constexpr std::uint32_t kDtenVersion = 1;

[[nodiscard]] std::vector<std::byte> encode_dten(const DenseTensor& t);
[[nodiscard]] DenseTensor decode_dten(std::span<const std::byte> bytes);

void write_dten(const std::filesystem::path& path, const DenseTensor& t);
[[nodiscard]] DenseTensor read_dten(const std::filesystem::path& path);

/// Reads a headerless file of little-endian doubles with the given shape.
[[nodiscard]] DenseTensor import_raw(const std::filesystem::path& path, const Dims& dims);

/// Header `outer,mode,inner,elapsed_s,rel_err`; floats with 17 significant digits.
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> records);
[[nodiscard]] std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

/// core.dten plus factor_1.dten .. factor_d.dten (each n_i x r_i, order 2).
void write_model(const std::filesystem::path& dir, const TuckerModel& m);
[[nodiscard]] TuckerModel read_model(const std::filesystem::path& dir);

} // namespace tucker::io
