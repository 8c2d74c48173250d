#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "suranyi/interval.hpp"
#include "suranyi/log_arg.hpp"
#include "suranyi/search.hpp"

namespace suranyi {

// Fixed-point decimal with four fractional digits, e.g. -1.3479 is -13479.
// Emitted constants are held this way so identities such as v = -(t + u)
// hold exactly.
struct Decimal4 {
    std::int64_t scaled = 0;

    // Accepts "2.1221", "-1.39", "3"; at most four fractional digits.
    static Decimal4 parse(std::string_view text);
    // Least multiple of 10^-4 that is >= v.
    static Decimal4 ceil_of(mpfr_srcptr v);
    static Decimal4 ceil_of(double v);

    [[nodiscard]] std::string to_string() const;  // always four decimals
    [[nodiscard]] double to_double() const { return static_cast<double>(scaled) / 1e4; }
    [[nodiscard]] Interval to_interval(Precision prec) const;  // exact decimal, rounded outward

    friend Decimal4 operator+(Decimal4 a, Decimal4 b) { return {a.scaled + b.scaled}; }
    friend Decimal4 operator-(Decimal4 a) { return {-a.scaled}; }
    friend auto operator<=>(const Decimal4&, const Decimal4&) = default;
};

// Constants valid for every B >= floor:
//   A <= log2(B+1) + 2 log2 ln(B+1) + t
//   C - B <= log2 ln(B+1) + u
//   B - A >= ... with v = -(t + u)
struct FinalConstants {
    LogArg floor = LogArg::decimal_power(6);
    Decimal4 t;
    Decimal4 u;
    Decimal4 v;
    Interval c_at_t;   // c_func(t, floor)
    Interval u_bound;  // u_thresh + phi2(t, floor); u >= u_bound.hi
    Precision precision;
};

struct ConstantsOptions {
    // Fixed t to certify; when empty t is bisected at `tol` and rounded up to
    // four decimals.
    std::optional<Decimal4> t;
    double tol = 1e-9;
    Precision precision = kDefaultPrecision;
    Precision max_precision = kMaxPrecision;
};

// Throws CertificationFailure (naming the inequality) when c_func(t, floor)
// cannot be shown positive at any precision up to the cap.
FinalConstants certify_constants(const LogArg& floor, const ConstantsOptions& options = {});
FinalConstants emit_final_constants(const LogArg& frontier, const ConstantsOptions& options = {});

struct StageBounds {
    LogArg b_lo = LogArg::decimal_power(6);
    LogArg b_hi = LogArg::decimal_power(6);
    double t = 0;        // exact binary value, c_func(t, b_lo) > 0
    double u_const = 0;  // >= hi of u_thresh + phi2(t, b_lo)
    std::int64_t a_max = 0;  // floor of hi of a_t_bound(t, b_hi)
    std::int64_t k_max = 0;  // k_max_bound(u_const, b_hi)
    bool certified = false;
    Interval c_at_t;
    Interval a_t;
    Precision precision;
};

struct StageOptions {
    double t_tol = 1e-4;
    double slack = 1e-4;
    Precision precision = kDefaultPrecision;
    Precision max_precision = kMaxPrecision;
};

// Bounds on A and k = C - B for any solution with b_lo <= B <= b_hi, given
// that none exists below b_lo. Requires b_lo >= 10^6 and b_hi > b_lo.
// A_max is the floor of the certified upper endpoint (A is an integer).
StageBounds derive_stage(const LogArg& b_lo, const LogArg& b_hi, const StageOptions& options = {});

// (b, k) of a known solution A! = (B+1)...(B+k).
struct KnownSolution {
    std::uint64_t a;
    unsigned k;
    std::uint64_t b;
    friend bool operator==(const KnownSolution&, const KnownSolution&) = default;
};

inline const std::vector<KnownSolution> kDefaultKnown{{6, 3, 7}};

// Reference A bounds for the two default stages (3346 and 9993). Scans use
// the larger of these and the derived A_max.
std::optional<std::int64_t> reference_a_max(const LogArg& b_lo, const LogArg& b_hi);

struct LadderOptions {
    std::vector<std::pair<LogArg, LogArg>> stages;
    std::vector<KnownSolution> known = kDefaultKnown;
    // Externally verified floor: no nontrivial solution has B below this.
    LogArg initial_floor = LogArg::decimal_power(6);
    // Scans never go past this A; the remainder must come from `prior`.
    std::optional<std::uint64_t> a_cap;
    // One scan over the union of all stage boxes instead of one per stage.
    bool global_scan = false;
    // Previously completed scans (e.g. a stored full run) counted as coverage.
    std::vector<ScanReport> prior;
    ScanSpec scan_options;  // workers, block_size, digit_cap
    StageOptions stage_options;
};

struct StageResult {
    StageBounds bounds;
    std::int64_t scan_a_max = 0;
    // Scans run for this stage (empty when prior coverage or the global scan
    // already covers the box).
    std::vector<ScanReport> scans;
    bool covered = false;  // [2, scan_a_max] x [2, k_max] fully scanned
    std::vector<Hit> unexplained;  // hits with B in [b_lo, b_hi] not in known
    bool verified = false;
};

struct LadderReport {
    std::vector<StageResult> stages;
    std::vector<ScanReport> global_scans;
    LogArg frontier = LogArg::decimal_power(6);
};

// Throws InvalidArgument unless stages are contiguous, increasing and start
// at the initial floor. Stops at the first unverified stage.
LadderReport run_ladder(const LadderOptions& options);

nlohmann::ordered_json constants_to_json(const FinalConstants& c);
nlohmann::ordered_json stage_bounds_to_json(const StageBounds& s);
nlohmann::ordered_json ladder_report_to_json(const LadderReport& r);

}  // namespace suranyi
