// SPDX-License-Identifier: MIT
#include "tucker/io.hpp"

#include "tucker/errors.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

namespace tucker::io {

namespace {

constexpr char kMagic[4] = {'D', 'T', 'E', 'N'};
constexpr std::string_view kTraceHeader = "outer,mode,inner,elapsed_s,rel_err";

template <class U>
void put_le(std::vector<std::byte>& out, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i)
        out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xffu));
}

template <class U>
U get_le(std::span<const std::byte> in, std::size_t pos) {
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        v |= static_cast<U>(std::to_integer<unsigned>(in[pos + i])) << (8 * i);
    return v;
}

std::vector<double> decode_payload(std::span<const std::byte> bytes) {
    std::vector<double> values(bytes.size() / 8);
    for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] = std::bit_cast<double>(get_le<std::uint64_t>(bytes, 8 * k));
        if (!std::isfinite(values[k]))
            throw IoError(IoErrorKind::non_finite, "payload contains a non-finite value");
    }
    return values;
}

std::vector<std::byte> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoErrorKind::open, "cannot open " + path.string());
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::byte> out(buf.size());
    std::memcpy(out.data(), buf.data(), buf.size());
    return out;
}

void write_all(const std::filesystem::path& path, std::span<const std::byte> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(IoErrorKind::write, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(IoErrorKind::write, "write failed for " + path.string());
}

std::string format_double(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

template <class T>
T parse_field(std::string_view field, std::size_t line) {
    T v{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw IoError(IoErrorKind::parse, "bad field '" + std::string(field) + "' on trace line " +
                                              std::to_string(line));
    return v;
}

} // namespace

std::vector<std::byte> encode_dten(const DenseTensor& t) {
    std::vector<std::byte> out;
    out.reserve(12 + 8 * t.order() + 8 * t.size());
    for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
    put_le<std::uint32_t>(out, kDtenVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.order()));
    for (std::size_t n : t.dims()) put_le<std::uint64_t>(out, n);
    for (double v : t.data()) {
        if (!std::isfinite(v)) throw IoError(IoErrorKind::non_finite, "refusing to write a non-finite value");
        put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    }
    return out;
}

DenseTensor decode_dten(std::span<const std::byte> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw IoError(IoErrorKind::bad_magic, "not a DTEN file (bad magic)");
    if (bytes.size() < 12) throw IoError(IoErrorKind::truncated, "truncated DTEN header");
    const auto version = get_le<std::uint32_t>(bytes, 4);
    if (version != kDtenVersion)
        throw IoError(IoErrorKind::version_mismatch,
                      "unsupported DTEN version " + std::to_string(version));
    const auto order = get_le<std::uint32_t>(bytes, 8);
    if (order == 0) throw IoError(IoErrorKind::length_mismatch, "DTEN order must be positive");
    const std::size_t header = 12 + 8 * static_cast<std::size_t>(order);
    if (bytes.size() < header) throw IoError(IoErrorKind::truncated, "truncated DTEN header");

    Dims dims(order);
    std::size_t count = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
        dims[i] = get_le<std::uint64_t>(bytes, 12 + 8 * i);
        if (dims[i] == 0) throw IoError(IoErrorKind::length_mismatch, "DTEN dimension must be positive");
        if (count > std::numeric_limits<std::size_t>::max() / 8 / dims[i])
            throw IoError(IoErrorKind::length_mismatch, "DTEN dimensions overflow");
        count *= dims[i];
    }
    const std::size_t payload = bytes.size() - header;
    if (payload < 8 * count)
        throw IoError(IoErrorKind::truncated, "truncated DTEN payload: expected " +
                                                  std::to_string(8 * count) + " bytes, found " +
                                                  std::to_string(payload));
    if (payload > 8 * count)
        throw IoError(IoErrorKind::length_mismatch, "DTEN payload longer than its dimensions imply");
    return DenseTensor(std::move(dims), decode_payload(bytes.subspan(header)));
}

void write_dten(const std::filesystem::path& path, const DenseTensor& t) {
    write_all(path, encode_dten(t));
}

DenseTensor read_dten(const std::filesystem::path& path) { return decode_dten(read_all(path)); }

DenseTensor import_raw(const std::filesystem::path& path, const Dims& dims) {
    if (dims.empty()) throw ShapeError("import_raw: dims must be non-empty");
    for (std::size_t n : dims)
        if (n == 0) throw ShapeError("import_raw: dims must be positive");
    const auto bytes = read_all(path);
    const std::size_t expected = 8 * num_elements(dims);
    if (bytes.size() != expected)
        throw IoError(IoErrorKind::length_mismatch, "raw file has " + std::to_string(bytes.size()) +
                                                        " bytes, dims require " +
                                                        std::to_string(expected));
    return DenseTensor(dims, decode_payload(bytes));
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(IoErrorKind::write, "cannot open " + path.string() + " for writing");
    out << kTraceHeader << '\n';
    for (const auto& r : records)
        out << r.outer << ',' << r.mode << ',' << r.inner << ',' << format_double(r.elapsed_s) << ','
            << format_double(r.rel_err) << '\n';
    if (!out) throw IoError(IoErrorKind::write, "write failed for " + path.string());
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(IoErrorKind::open, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw IoError(IoErrorKind::parse, "missing trace header in " + path.string());
    std::vector<TraceRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view rest = line;
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
            f.push_back(rest.substr(0, pos));
            rest.remove_prefix(pos + 1);
        }
        f.push_back(rest);
        if (f.size() != 5) throw IoError(IoErrorKind::parse, "trace line " + std::to_string(lineno) + " needs 5 fields");
        records.push_back({parse_field<int>(f[0], lineno), parse_field<int>(f[1], lineno),
                           parse_field<int>(f[2], lineno), parse_field<double>(f[3], lineno),
                           parse_field<double>(f[4], lineno)});
    }
    return records;
}

void write_model(const std::filesystem::path& dir, const TuckerModel& m) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(IoErrorKind::write, "cannot create " + dir.string() + ": " + ec.message());
    write_dten(dir / "core.dten", m.core);
    for (std::size_t i = 0; i < m.factors.size(); ++i)
        write_dten(dir / ("factor_" + std::to_string(i + 1) + ".dten"),
                   DenseTensor::from_matrix(m.factors[i]));
}

TuckerModel read_model(const std::filesystem::path& dir) {
    TuckerModel m;
    m.core = read_dten(dir / "core.dten");
    for (std::size_t i = 0; i < m.core.order(); ++i) {
        const DenseTensor f = read_dten(dir / ("factor_" + std::to_string(i + 1) + ".dten"));
        if (f.order() != 2 || f.dim(1) != m.core.dim(i))
            throw IoError(IoErrorKind::length_mismatch,
                          "factor_" + std::to_string(i + 1) + " does not match the core shape");
        m.factors.push_back(f.to_matrix());
    }
    return m;
}

} // namespace tucker::io
