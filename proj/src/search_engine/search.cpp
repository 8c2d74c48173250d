#include "suranyi/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>

#include "suranyi/checkpoint.hpp"
#include "suranyi/errors.hpp"

namespace suranyi {

namespace {

// Hits with B + k up to this bound are also checked through full factorials.
constexpr std::uint64_t kFullIdentityLimit = 20'000;

}  // namespace

Hit Hit::make(std::uint64_t a, unsigned k, BigNat b) {
    const BigNat fa = factorial(a);
    if (fa != consecutive_product(b, k)) {
        throw ConsistencyError("hit (" + std::to_string(a) + ", " + std::to_string(k) + ", " + b.to_string() +
                               ") fails A! = prod(B+i)");
    }
    if (b.fits_u64() && b.to_u64() + k <= kFullIdentityLimit) {
        const std::uint64_t bv = b.to_u64();
        if (fa * factorial(bv) != factorial(bv + k)) {
            throw ConsistencyError("hit (" + std::to_string(a) + ", " + std::to_string(k) + ", " + b.to_string() +
                                   ") fails A! B! = (B+k)!");
        }
    }
    return Hit(a, k, std::move(b));
}

void ScanSpec::validate() const {
    if (a_min < 2) throw InvalidArgument("scan: a_min must be >= 2");
    if (a_max < a_min) throw InvalidArgument("scan: a_max must be >= a_min");
    if (k_min < 2) throw InvalidArgument("scan: k_min must be >= 2");
    if (k_max < k_min) throw InvalidArgument("scan: k_max must be >= k_min");
    if (k_max > kMaxScanK) throw InvalidArgument("scan: k_max must be <= 20");
    if (workers < 1) throw InvalidArgument("scan: workers must be >= 1");
    if (block_size < 1) throw InvalidArgument("scan: block_size must be >= 1");
}

bool ScanReport::complete() const {
    return completed_ranges.size() == 1 && completed_ranges.front() == ARange{spec.a_min, spec.a_max};
}

std::uint64_t degenerate_match_count(ARange range, unsigned k_min, unsigned k_max) {
    std::uint64_t count = 0;
    for (unsigned k = k_min; k <= k_max; ++k) {
        if (range.start <= k && k <= range.end) ++count;          // B = 0
        if (range.start <= k + 1 && k + 1 <= range.end) ++count;  // B = 1
    }
    return count;
}

namespace {

struct Job {
    ARange range;
    // Rescan of a checkpointed block to recover its hits.
    bool recover = false;
    std::uint64_t expected_hits = 0;
};

struct BlockResult {
    std::vector<Hit> hits;
    std::uint64_t degenerate = 0;
};

BlockResult scan_block(ARange range, const ScanSpec& spec) {
    BlockResult out;
    FactorialAccumulator acc(range.start - 1, spec.digit_cap);
    const BigNat one(1);
    for (std::uint64_t a = range.start; a <= range.end; ++a) {
        acc.advance();
        for (unsigned k = spec.k_min; k <= spec.k_max; ++k) {
            auto b = find_completing_b(acc.value(), k);
            if (!b) continue;
            if (*b <= one) {
                ++out.degenerate;
            } else {
                out.hits.push_back(Hit::make(a, k, std::move(*b)));
            }
        }
    }
    return out;
}

std::vector<ARange> coalesce(std::vector<ARange> ranges) {
    std::sort(ranges.begin(), ranges.end(), [](ARange x, ARange y) { return x.start < y.start; });
    std::vector<ARange> out;
    for (const ARange r : ranges) {
        if (!out.empty() && out.back().end + 1 == r.start) {
            out.back().end = r.end;
        } else {
            out.push_back(r);
        }
    }
    return out;
}

// Splits [a_min, a_max] minus `done` into blocks of at most block_size.
std::vector<ARange> pending_blocks(const ScanSpec& spec, const std::vector<ARange>& done) {
    std::vector<ARange> gaps;
    std::uint64_t next = spec.a_min;
    for (const ARange r : coalesce(done)) {
        if (r.start > next) gaps.push_back({next, r.start - 1});
        next = r.end + 1;
    }
    if (next <= spec.a_max) gaps.push_back({next, spec.a_max});

    std::vector<ARange> blocks;
    for (const ARange g : gaps) {
        for (std::uint64_t s = g.start; s <= g.end; s += spec.block_size) {
            blocks.push_back({s, std::min(g.end, s + spec.block_size - 1)});
            if (g.end - s < spec.block_size) break;
        }
    }
    return blocks;
}

// Runs the jobs on worker threads; the calling thread collects results in
// job order, appends checkpoint lines and merges hits.
ScanReport execute(const ScanSpec& spec, std::vector<Job> jobs, std::vector<ARange> already_done,
                   std::optional<CheckpointWriter> writer, const std::chrono::steady_clock::time_point start) {
    std::sort(jobs.begin(), jobs.end(), [](const Job& x, const Job& y) { return x.range.start < y.range.start; });

    ScanReport report;
    report.spec = spec;
    for (const ARange r : already_done) report.stats.degenerate_matches += degenerate_match_count(r, spec.k_min, spec.k_max);
    std::vector<ARange> completed = already_done;

    std::vector<std::optional<BlockResult>> results(jobs.size());
    std::exception_ptr failure;
    std::mutex mu;
    std::condition_variable ready;
    std::atomic<std::size_t> next_job{0};
    std::atomic<bool> stop{false};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next_job.fetch_add(1);
            if (i >= jobs.size() || stop.load()) return;
            try {
                BlockResult r = scan_block(jobs[i].range, spec);
                const std::lock_guard lock(mu);
                results[i] = std::move(r);
            } catch (...) {
                const std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                stop = true;
            }
            ready.notify_all();
        }
    };

    {
        std::vector<std::jthread> pool;
        const auto n_threads = std::min<std::size_t>(spec.workers, jobs.size());
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);

        for (std::size_t i = 0; i < jobs.size(); ++i) {
            BlockResult r;
            {
                std::unique_lock lock(mu);
                ready.wait(lock, [&] { return results[i].has_value() || failure; });
                if (failure) break;
                r = std::move(*results[i]);
                results[i].reset();
            }
            const Job& job = jobs[i];
            try {
                if (job.recover) {
                    if (r.hits.size() != job.expected_hits) {
                        throw CorruptCheckpoint("checkpoint block " + std::to_string(job.range.start) + "-" +
                                                std::to_string(job.range.end) + " records " +
                                                std::to_string(job.expected_hits) + " hits, rescan found " +
                                                std::to_string(r.hits.size()));
                    }
                    ++report.stats.blocks_recovered;
                } else {
                    if (writer) writer->write({job.range.start, job.range.end, r.hits.size()});
                    ++report.stats.blocks_scanned;
                }
            } catch (...) {
                const std::lock_guard lock(mu);
                failure = std::current_exception();
                stop = true;
                break;
            }
            report.stats.degenerate_matches += r.degenerate;
            completed.push_back(job.range);
            for (auto& h : r.hits) (h.b_below_a() ? report.flagged_hits : report.hits).push_back(std::move(h));
        }
        if (failure) stop = true;
    }  // join
    if (failure) std::rethrow_exception(failure);

    const auto by_a_k = [](const Hit& x, const Hit& y) { return x.a() != y.a() ? x.a() < y.a() : x.k() < y.k(); };
    std::sort(report.hits.begin(), report.hits.end(), by_a_k);
    std::sort(report.flagged_hits.begin(), report.flagged_hits.end(), by_a_k);
    report.completed_ranges = coalesce(std::move(completed));
    if (!report.completed_ranges.empty()) {
        report.stats.peak_factorial_digits = factorial(report.completed_ranges.back().end, spec.digit_cap).decimal_digits();
    }
    report.stats.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<Job> new_jobs(const ScanSpec& spec, const std::vector<ARange>& done) {
    std::vector<Job> jobs;
    for (const ARange r : pending_blocks(spec, done)) {
        if (spec.halt_after && r.start > *spec.halt_after) continue;
        jobs.push_back({r});
    }
    return jobs;
}

}  // namespace

ScanReport scan(const ScanSpec& spec) {
    const auto start = std::chrono::steady_clock::now();
    spec.validate();
    std::optional<CheckpointWriter> writer;
    if (spec.checkpoint_path) {
        writer = CheckpointWriter::create(*spec.checkpoint_path, {spec.a_min, spec.a_max, spec.k_min, spec.k_max});
    }
    return execute(spec, new_jobs(spec, {}), {}, std::move(writer), start);
}

ScanReport resume(const std::filesystem::path& checkpoint_path, const ScanSpec& options) {
    const auto start = std::chrono::steady_clock::now();
    const Checkpoint cp = read_checkpoint(checkpoint_path);

    ScanSpec spec = options;
    spec.a_min = cp.header.a_min;
    spec.a_max = cp.header.a_max;
    spec.k_min = cp.header.k_min;
    spec.k_max = cp.header.k_max;
    spec.checkpoint_path = checkpoint_path;
    try {
        spec.validate();
    } catch (const InvalidArgument& e) {
        throw CorruptCheckpoint(std::string("checkpoint header: ") + e.what());
    }

    std::vector<ARange> done;
    std::vector<ARange> skipped;
    std::vector<Job> jobs;
    for (const CheckpointBlock& b : cp.blocks) {
        const ARange r{b.a_start, b.a_end};
        done.push_back(r);
        if (b.hit_count == 0) {
            skipped.push_back(r);
        } else {
            jobs.push_back({r, true, b.hit_count});
        }
    }
    for (Job& j : new_jobs(spec, done)) jobs.push_back(j);
    return execute(spec, std::move(jobs), std::move(skipped), CheckpointWriter::append_to(checkpoint_path), start);
}

nlohmann::ordered_json hit_to_json(const Hit& hit) {
    nlohmann::ordered_json j;
    j["A"] = hit.a();
    j["k"] = hit.k();
    const BigNat c = hit.b() + BigNat(hit.k());
    if (c.fits_u64()) {
        j["B"] = hit.b().to_u64();
        j["C"] = c.to_u64();
    } else {
        j["B"] = hit.b().to_string();
        j["C"] = c.to_string();
    }
    j["b_below_a"] = hit.b_below_a();
    return j;
}

nlohmann::ordered_json scan_report_to_json(const ScanReport& report) {
    nlohmann::ordered_json j;
    j["a_min"] = report.spec.a_min;
    j["a_max"] = report.spec.a_max;
    j["k_min"] = report.spec.k_min;
    j["k_max"] = report.spec.k_max;
    j["complete"] = report.complete();
    auto ranges = nlohmann::ordered_json::array();
    for (const ARange r : report.completed_ranges) ranges.push_back({r.start, r.end});
    j["completed_ranges"] = ranges;
    auto hits = nlohmann::ordered_json::array();
    for (const Hit& h : report.hits) hits.push_back(hit_to_json(h));
    j["hits"] = hits;
    auto flagged = nlohmann::ordered_json::array();
    for (const Hit& h : report.flagged_hits) flagged.push_back(hit_to_json(h));
    j["flagged_hits"] = flagged;
    j["peak_factorial_digits"] = report.stats.peak_factorial_digits;
    j["degenerate_matches"] = report.stats.degenerate_matches;
    return j;
}

namespace {

Hit hit_from_json(const nlohmann::json& j) {
    const auto& b = j.at("B");
    BigNat bv = b.is_string() ? BigNat::from_string(b.get<std::string>()) : BigNat(b.get<std::uint64_t>());
    return Hit::make(j.at("A").get<std::uint64_t>(), j.at("k").get<unsigned>(), std::move(bv));
}

}  // namespace

ScanReport scan_report_from_json(const nlohmann::json& j) {
    try {
        ScanReport r;
        r.spec.a_min = j.at("a_min").get<std::uint64_t>();
        r.spec.a_max = j.at("a_max").get<std::uint64_t>();
        r.spec.k_min = j.at("k_min").get<unsigned>();
        r.spec.k_max = j.at("k_max").get<unsigned>();
        r.spec.validate();
        for (const auto& range : j.at("completed_ranges")) {
            const ARange ar{range.at(0).get<std::uint64_t>(), range.at(1).get<std::uint64_t>()};
            if (ar.start > ar.end || ar.start < r.spec.a_min || ar.end > r.spec.a_max) {
                throw InvalidArgument("scan report: completed range outside the scan");
            }
            r.completed_ranges.push_back(ar);
        }
        for (const auto& h : j.at("hits")) r.hits.push_back(hit_from_json(h));
        if (j.contains("flagged_hits")) {
            for (const auto& h : j.at("flagged_hits")) r.flagged_hits.push_back(hit_from_json(h));
        }
        r.stats.peak_factorial_digits = j.value("peak_factorial_digits", std::size_t{0});
        r.stats.degenerate_matches = j.value("degenerate_matches", std::uint64_t{0});
        r.completed_ranges = coalesce(std::move(r.completed_ranges));
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("scan report: ") + e.what());
    }
}

}  // namespace suranyi
