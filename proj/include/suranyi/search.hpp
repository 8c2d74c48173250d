#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "suranyi/bignat.hpp"
#include "suranyi/exact_arith.hpp"

namespace suranyi {

// A! = (B+1)(B+2)...(B+k), i.e. A! B! = (B+k)!.
class Hit {
public:
    // Re-verifies the identity exactly; throws ConsistencyError if it fails.
    static Hit make(std::uint64_t a, unsigned k, BigNat b);

    [[nodiscard]] std::uint64_t a() const noexcept { return a_; }
    [[nodiscard]] unsigned k() const noexcept { return k_; }
    [[nodiscard]] const BigNat& b() const noexcept { return b_; }
    // B < A: not in canonical A <= B order, reported but flagged.
    [[nodiscard]] bool b_below_a() const { return b_ < BigNat(a_); }

    friend bool operator==(const Hit&, const Hit&) = default;

private:
    Hit(std::uint64_t a, unsigned k, BigNat b) : a_(a), k_(k), b_(std::move(b)) {}

    std::uint64_t a_;
    unsigned k_;
    BigNat b_;
};

inline constexpr unsigned kMaxScanK = 20;

struct ScanSpec {
    std::uint64_t a_min = 2;
    std::uint64_t a_max = 2;
    unsigned k_min = 2;
    unsigned k_max = 12;
    unsigned workers = 1;
    std::uint64_t block_size = 64;
    std::size_t digit_cap = kDefaultDigitCap;
    std::optional<std::filesystem::path> checkpoint_path;
    // Test hook: only blocks starting at or below this A are scheduled,
    // leaving the scan incomplete as if interrupted.
    std::optional<std::uint64_t> halt_after;

    // Throws InvalidArgument unless 2 <= a_min <= a_max, 2 <= k_min <= k_max <= 20,
    // workers >= 1 and block_size >= 1.
    void validate() const;
};

struct ARange {
    std::uint64_t start;
    std::uint64_t end;  // inclusive
    friend bool operator==(const ARange&, const ARange&) = default;
};

struct ScanStats {
    double elapsed_s = 0;
    std::size_t peak_factorial_digits = 0;
    // Matches with B = 0 or B = 1 (A = k or A = k+1); filtered from hits.
    std::uint64_t degenerate_matches = 0;
    // Blocks scanned for the first time in this run.
    std::uint64_t blocks_scanned = 0;
    // Blocks rescanned on resume to recover their hit lists.
    std::uint64_t blocks_recovered = 0;
};

struct ScanReport {
    ScanSpec spec;
    std::vector<Hit> hits;               // B >= A, sorted by (A, k)
    std::vector<Hit> flagged_hits;       // B < A (mirror images), sorted by (A, k)
    std::vector<ARange> completed_ranges;  // coalesced, ascending
    ScanStats stats;

    [[nodiscard]] bool complete() const;
};

// Every A in [a_min, a_max] and k in [k_min, k_max] is tested with
// find_completing_b. Contiguous A-blocks are farmed out to `workers`
// threads; each seeds its own factorial accumulator at (start-1)!. Results
// are merged and checkpointed in A order, so output does not depend on the
// worker count. An existing checkpoint file at spec.checkpoint_path is
// overwritten.
ScanReport scan(const ScanSpec& spec);

// Continues the scan recorded in a checkpoint. workers, block_size,
// digit_cap and halt_after are taken from `options`; the A/k ranges come
// from the checkpoint header. Completed blocks are not rescanned unless their
// hit count is nonzero, in which case they are rescanned to recover the hits
// and the counts must agree.
ScanReport resume(const std::filesystem::path& checkpoint_path, const ScanSpec& options);

// Number of (A, k) pairs in the A-range with A = k or A = k + 1.
std::uint64_t degenerate_match_count(ARange range, unsigned k_min, unsigned k_max);

// Canonical, byte-stable JSON of a report, without timing.
nlohmann::ordered_json hit_to_json(const Hit& hit);
nlohmann::ordered_json scan_report_to_json(const ScanReport& report);
// Inverse of scan_report_to_json. Every hit is re-verified; throws
// InvalidArgument on a malformed document and ConsistencyError on a bad hit.
ScanReport scan_report_from_json(const nlohmann::json& j);

}  // namespace suranyi
