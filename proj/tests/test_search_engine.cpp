#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "suranyi/checkpoint.hpp"
#include "suranyi/errors.hpp"
#include "suranyi/search.hpp"

using namespace suranyi;
namespace fs = std::filesystem;

namespace {

ScanSpec spec_for(std::uint64_t a_min, std::uint64_t a_max, unsigned k_max = 12) {
    ScanSpec s;
    s.a_min = a_min;
    s.a_max = a_max;
    s.k_max = k_max;
    return s;
}

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "suranyi_search_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    fs::remove(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

std::string canon(const ScanReport& r) { return scan_report_to_json(r).dump(); }

}  // namespace

TEST_CASE("small ranges") {
    const auto r = scan(spec_for(2, 100));
    REQUIRE(r.hits.size() == 1);
    CHECK(r.hits[0].a() == 6);
    CHECK(r.hits[0].k() == 3);
    CHECK(r.hits[0].b() == BigNat(7));
    CHECK_FALSE(r.hits[0].b_below_a());
    CHECK(r.complete());
    // 5! 3! = 6! and 7! 6! = 10!, both with B < A.
    REQUIRE(r.flagged_hits.size() == 2);
    CHECK(r.flagged_hits[0] == Hit::make(5, 3, BigNat(3)));
    CHECK(r.flagged_hits[1] == Hit::make(7, 4, BigNat(6)));
    CHECK(r.flagged_hits[1].b_below_a());

    CHECK(scan(spec_for(2, 5)).hits.empty());
    CHECK(scan(spec_for(7, 2000)).hits.empty());
}

TEST_CASE("hit json") {
    const auto r = scan(spec_for(2, 10));
    REQUIRE(r.hits.size() == 1);
    CHECK(hit_to_json(r.hits[0]).dump() == R"({"A":6,"k":3,"B":7,"C":10,"b_below_a":false})");
}

TEST_CASE("Hit::make rejects a non-solution") {
    CHECK_THROWS_AS(Hit::make(6, 3, BigNat(8)), ConsistencyError);
    CHECK_THROWS_AS(Hit::make(7, 2, BigNat(70)), ConsistencyError);
    CHECK_NOTHROW(Hit::make(6, 3, BigNat(7)));
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(scan(spec_for(1, 10)), InvalidArgument);
    CHECK_THROWS_AS(scan(spec_for(10, 9)), InvalidArgument);
    CHECK_THROWS_AS(scan(spec_for(2, 10, 21)), InvalidArgument);
    auto s = spec_for(2, 10);
    s.k_min = 1;
    CHECK_THROWS_AS(scan(s), InvalidArgument);
    s = spec_for(2, 10);
    s.workers = 0;
    CHECK_THROWS_AS(scan(s), InvalidArgument);
    s = spec_for(2, 10);
    s.block_size = 0;
    CHECK_THROWS_AS(scan(s), InvalidArgument);
}

TEST_CASE("degenerate matches are filtered and counted") {
    // A = k gives B = 0 and A = k + 1 gives B = 1.
    const auto r = scan(spec_for(2, 40));
    CHECK(r.stats.degenerate_matches == degenerate_match_count({2, 40}, 2, 12));
    CHECK(degenerate_match_count({2, 40}, 2, 12) == 22);
    CHECK(degenerate_match_count({2, 2}, 2, 12) == 1);
    CHECK(degenerate_match_count({14, 100}, 2, 12) == 0);
    for (const auto& h : r.hits) CHECK(h.b() > BigNat(1));

    for (std::uint64_t lo : {2, 3, 7, 13}) {
        for (std::uint64_t hi : {lo, lo + 1, std::uint64_t{20}}) {
            if (hi < lo) continue;
            auto s = spec_for(lo, hi);
            s.block_size = 3;
            CHECK(scan(s).stats.degenerate_matches == degenerate_match_count({lo, hi}, 2, 12));
        }
    }
}

TEST_CASE("result does not depend on worker count or block size") {
    auto s = spec_for(2, 600);
    s.workers = 1;
    const std::string ref = canon(scan(s));
    for (unsigned w : {2u, 8u}) {
        for (std::uint64_t bs : {1u, 7u, 64u, 1000u}) {
            s.workers = w;
            s.block_size = bs;
            CHECK(canon(scan(s)) == ref);
        }
    }
}

TEST_CASE("union of sub-range scans equals the full scan") {
    const auto full = scan(spec_for(2, 500));
    std::vector<Hit> merged, flagged;
    std::uint64_t degenerate = 0;
    for (auto [lo, hi] : {std::pair<std::uint64_t, std::uint64_t>{2, 5}, {6, 6}, {7, 123}, {124, 500}}) {
        const auto part = scan(spec_for(lo, hi));
        merged.insert(merged.end(), part.hits.begin(), part.hits.end());
        flagged.insert(flagged.end(), part.flagged_hits.begin(), part.flagged_hits.end());
        degenerate += part.stats.degenerate_matches;
    }
    CHECK(merged == full.hits);
    CHECK(flagged == full.flagged_hits);
    CHECK(degenerate == full.stats.degenerate_matches);
}

TEST_CASE("checkpoint is written in A order") {
    const auto p = temp_file("order.ckpt");
    auto s = spec_for(2, 100);
    s.block_size = 10;
    s.workers = 4;
    s.checkpoint_path = p;
    scan(s);
    const Checkpoint cp = read_checkpoint(p);
    CHECK(cp.header == CheckpointHeader{2, 100, 2, 12});
    REQUIRE(cp.blocks.size() == 10);
    CHECK(cp.blocks[0] == CheckpointBlock{2, 11, 3});
    for (std::size_t i = 1; i < cp.blocks.size(); ++i) {
        CHECK(cp.blocks[i].a_start == cp.blocks[i - 1].a_end + 1);
        CHECK(cp.blocks[i].hit_count == 0);
    }
    CHECK(cp.blocks.back().a_end == 100);
}

TEST_CASE("interrupted scan resumes to the same result") {
    const auto p = temp_file("resume.ckpt");
    auto s = spec_for(2, 700);
    s.block_size = 50;
    s.workers = 2;
    const std::string fresh = canon(scan(s));

    s.checkpoint_path = p;
    s.halt_after = 300;
    const auto partial = scan(s);
    CHECK_FALSE(partial.complete());
    CHECK(partial.completed_ranges == std::vector<ARange>{{2, 301}});
    CHECK(partial.hits.size() == 1);
    CHECK(partial.flagged_hits.size() == 2);

    ScanSpec opts;
    opts.workers = 3;
    opts.block_size = 50;
    const auto resumed = resume(p, opts);
    CHECK(resumed.complete());
    CHECK(canon(resumed) == fresh);
    CHECK(resumed.stats.blocks_recovered == 1);
    CHECK(resumed.stats.blocks_scanned == 8);

    // Already complete: nothing new is scanned and the file is unchanged.
    const std::string before = slurp(p);
    const auto again = resume(p, opts);
    CHECK(again.stats.blocks_scanned == 0);
    CHECK(canon(again) == fresh);
    CHECK(slurp(p) == before);
}

TEST_CASE("resume with a different block size fills the gaps") {
    const auto p = temp_file("reblock.ckpt");
    auto s = spec_for(2, 400);
    s.block_size = 37;
    s.checkpoint_path = p;
    s.halt_after = 100;
    scan(s);
    ScanSpec opts;
    opts.block_size = 11;
    const auto r = resume(p, opts);
    CHECK(r.complete());
    s.checkpoint_path.reset();
    s.halt_after.reset();
    CHECK(canon(r) == canon(scan(s)));
    CHECK(read_checkpoint(p).blocks.back().a_end == 400);
}

TEST_CASE("corrupt checkpoints are rejected") {
    const auto p = temp_file("corrupt.ckpt");
    const std::string header = format_header_line({2, 100, 2, 12}) + "\n";
    const std::string b1 = format_block_line({2, 11, 3}) + "\n";
    const std::string b2 = format_block_line({12, 21, 0}) + "\n";
    ScanSpec opts;

    spit(p, header + b1 + b2);
    CHECK(resume(p, opts).complete());

    SUBCASE("overlap") {
        spit(p, header + b1 + format_block_line({11, 20, 0}) + "\n");
        CHECK_THROWS_AS(resume(p, opts), CorruptCheckpoint);
    }
    SUBCASE("bad crc") {
        std::string bad = b2;
        bad[bad.size() - 2] = bad[bad.size() - 2] == '0' ? '1' : '0';
        spit(p, header + b1 + bad);
        CHECK_THROWS_AS(resume(p, opts), CorruptCheckpoint);
    }
    SUBCASE("non-canonical spacing") {
        spit(p, header + b1 + " " + b2);
        CHECK_THROWS_AS(resume(p, opts), CorruptCheckpoint);
    }
    SUBCASE("leading zero") {
        const std::string payload = "012 21 0";
        char crc[9];
        std::snprintf(crc, sizeof crc, "%08x", crc32_of(payload));
        spit(p, header + b1 + payload + " " + crc + "\n");
        CHECK_THROWS_AS(resume(p, opts), CorruptCheckpoint);
    }
    SUBCASE("truncated last line") {
        spit(p, header + b1 + b2.substr(0, b2.size() - 3));
        CHECK_THROWS_AS(resume(p, opts), CorruptCheckpoint);
    }
    SUBCASE("range outside header") {
        spit(p, header + format_block_line({90, 110, 0}) + "\n");
        CHECK_THROWS_AS(resume(p, opts), CorruptCheckpoint);
    }
    SUBCASE("bad header") {
        spit(p, "SCANv2 2 100 2 12\n" + b1);
        CHECK_THROWS_AS(resume(p, opts), CorruptCheckpoint);
        spit(p, format_header_line({2, 100, 2, 30}) + "\n" + b1);
        CHECK_THROWS_AS(resume(p, opts), CorruptCheckpoint);
    }
    SUBCASE("hit count disagrees with rescan") {
        spit(p, header + format_block_line({2, 11, 2}) + "\n");
        CHECK_THROWS_AS(resume(p, opts), CorruptCheckpoint);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(resume(temp_file("absent.ckpt"), opts), IoError);
    }
}

TEST_CASE("digit cap is enforced") {
    auto s = spec_for(2, 3000);
    s.digit_cap = 5000;
    CHECK_THROWS_AS(scan(s), ResourceError);
}

TEST_CASE("peak factorial digits") {
    CHECK(scan(spec_for(2, 100)).stats.peak_factorial_digits == 158);
    CHECK(scan(spec_for(2, 1000)).stats.peak_factorial_digits == 2568);
}

TEST_CASE("report json round trip") {
    const auto r = scan(spec_for(2, 300));
    const auto j = scan_report_to_json(r);
    const auto back = scan_report_from_json(nlohmann::json::parse(j.dump()));
    CHECK(scan_report_to_json(back).dump() == j.dump());
    CHECK(back.complete());

    auto bad = nlohmann::json::parse(j.dump());
    bad["hits"][0]["B"] = 8;
    CHECK_THROWS_AS(scan_report_from_json(bad), ConsistencyError);
    bad = nlohmann::json::parse(j.dump());
    bad.erase("a_max");
    CHECK_THROWS_AS(scan_report_from_json(bad), InvalidArgument);
    bad = nlohmann::json::parse(j.dump());
    bad["completed_ranges"][0][1] = 400;
    CHECK_THROWS_AS(scan_report_from_json(bad), InvalidArgument);
}
