#include "suranyi/checkpoint.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include <zlib.h>

#include "suranyi/errors.hpp"

namespace suranyi {

std::uint32_t crc32_of(std::string_view payload) {
    const auto* bytes = reinterpret_cast<const Bytef*>(payload.data());
    return static_cast<std::uint32_t>(::crc32(::crc32(0L, Z_NULL, 0), bytes, static_cast<uInt>(payload.size())));
}

std::string format_header_line(const CheckpointHeader& h) {
    return "SCANv1 " + std::to_string(h.a_min) + " " + std::to_string(h.a_max) + " " + std::to_string(h.k_min) +
           " " + std::to_string(h.k_max);
}

std::string format_block_line(const CheckpointBlock& b) {
    const std::string payload =
        std::to_string(b.a_start) + " " + std::to_string(b.a_end) + " " + std::to_string(b.hit_count);
    char crc[9];
    std::snprintf(crc, sizeof crc, "%08x", crc32_of(payload));
    return payload + " " + crc;
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const auto next = line.find(' ', pos);
        const auto end = next == std::string_view::npos ? line.size() : next;
        out.push_back(line.substr(pos, end - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::uint64_t parse_field(std::string_view field, std::size_t line_no) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw CorruptCheckpoint("checkpoint line " + std::to_string(line_no) + ": bad field '" + std::string(field) + "'");
    }
    return v;
}

}  // namespace

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read checkpoint " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    if (text.empty() || text.back() != '\n') throw CorruptCheckpoint("checkpoint does not end with a newline");
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        const auto nl = text.find('\n', pos);
        lines.emplace_back(text.data() + pos, nl - pos);
        pos = nl + 1;
    }

    Checkpoint cp;
    {
        const auto f = split_spaces(lines[0]);
        if (f.size() != 5 || f[0] != "SCANv1") throw CorruptCheckpoint("checkpoint header malformed");
        cp.header.a_min = parse_field(f[1], 1);
        cp.header.a_max = parse_field(f[2], 1);
        cp.header.k_min = static_cast<unsigned>(parse_field(f[3], 1));
        cp.header.k_max = static_cast<unsigned>(parse_field(f[4], 1));
        if (format_header_line(cp.header) != lines[0]) throw CorruptCheckpoint("checkpoint header not canonical");
        if (cp.header.a_min > cp.header.a_max || cp.header.k_min > cp.header.k_max) {
            throw CorruptCheckpoint("checkpoint header ranges are empty");
        }
    }

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_spaces(lines[i]);
        if (f.size() != 4) throw CorruptCheckpoint("checkpoint line " + std::to_string(i + 1) + ": expected 4 fields");
        CheckpointBlock b{parse_field(f[0], i + 1), parse_field(f[1], i + 1), parse_field(f[2], i + 1)};
        if (format_block_line(b) != lines[i]) {
            throw CorruptCheckpoint("checkpoint line " + std::to_string(i + 1) + ": checksum or format mismatch");
        }
        if (b.a_start > b.a_end || b.a_start < cp.header.a_min || b.a_end > cp.header.a_max) {
            throw CorruptCheckpoint("checkpoint line " + std::to_string(i + 1) + ": range outside the scan");
        }
        cp.blocks.push_back(b);
    }

    std::vector<CheckpointBlock> sorted = cp.blocks;
    std::sort(sorted.begin(), sorted.end(),
              [](const CheckpointBlock& a, const CheckpointBlock& b) { return a.a_start < b.a_start; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].a_start <= sorted[i - 1].a_end) {
            throw CorruptCheckpoint("checkpoint blocks overlap at A=" + std::to_string(sorted[i].a_start));
        }
    }
    return cp;
}

CheckpointWriter::CheckpointWriter(std::filesystem::path path, std::ofstream out)
    : path_(std::move(path)), out_(std::move(out)) {}

CheckpointWriter CheckpointWriter::create(const std::filesystem::path& path, const CheckpointHeader& header) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create checkpoint " + path.string());
    out << format_header_line(header) << '\n' << std::flush;
    if (!out) throw IoError("cannot write checkpoint " + path.string());
    return CheckpointWriter(path, std::move(out));
}

CheckpointWriter CheckpointWriter::append_to(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot open checkpoint " + path.string());
    return CheckpointWriter(path, std::move(out));
}

void CheckpointWriter::write(const CheckpointBlock& block) {
    out_ << format_block_line(block) << '\n' << std::flush;
    if (!out_) throw IoError("cannot write checkpoint " + path_.string());
}

}  // namespace suranyi
