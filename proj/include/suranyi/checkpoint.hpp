#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace suranyi {

// Line-oriented scan checkpoint:
//
//   SCANv1 <a_min> <a_max> <k_min> <k_max>
//   <a_start> <a_end> <hit_count> <crc32>
//   ...
//
// One block line per completed block. The CRC-32 covers the payload
// "<a_start> <a_end> <hit_count>" and is written as 8 lowercase hex digits.
// Any byte-level deviation from this format is a corrupt checkpoint.
struct CheckpointHeader {
    std::uint64_t a_min = 0;
    std::uint64_t a_max = 0;
    unsigned k_min = 0;
    unsigned k_max = 0;

    friend bool operator==(const CheckpointHeader&, const CheckpointHeader&) = default;
};

struct CheckpointBlock {
    std::uint64_t a_start = 0;
    std::uint64_t a_end = 0;
    std::uint64_t hit_count = 0;

    friend bool operator==(const CheckpointBlock&, const CheckpointBlock&) = default;
};

struct Checkpoint {
    CheckpointHeader header;
    std::vector<CheckpointBlock> blocks;  // file order
};

std::uint32_t crc32_of(std::string_view payload);
std::string format_header_line(const CheckpointHeader& header);
std::string format_block_line(const CheckpointBlock& block);

// Parses and validates a checkpoint. Throws CorruptCheckpoint on any format,
// checksum, range or overlap violation, IoError if the file cannot be read.
Checkpoint read_checkpoint(const std::filesystem::path& path);

// Appends block lines, flushing after each so a crash loses at most the
// block in flight.
class CheckpointWriter {
public:
    // Creates (truncating) the file and writes the header.
    static CheckpointWriter create(const std::filesystem::path& path, const CheckpointHeader& header);
    // Opens an existing, already validated checkpoint for appending.
    static CheckpointWriter append_to(const std::filesystem::path& path);

    void write(const CheckpointBlock& block);

private:
    CheckpointWriter(std::filesystem::path path, std::ofstream out);

    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace suranyi
