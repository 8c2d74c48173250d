#include "suranyi/ladder.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

#include "suranyi/bounds.hpp"
#include "suranyi/errors.hpp"

namespace suranyi {

// ------------------------------------------------------------- Decimal4

Decimal4 Decimal4::parse(std::string_view text) {
    const std::string original(text);
    auto bad = [&] { return InvalidArgument("not a decimal with at most 4 fractional digits: '" + original + "'"); };
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || whole.size() > 12 || frac.size() > 4) throw bad();
    if (dot != std::string_view::npos && frac.empty()) throw bad();
    std::int64_t scaled = 0;
    for (char ch : whole) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw bad();
        scaled = scaled * 10 + (ch - '0');
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const char ch = i < frac.size() ? frac[i] : '0';
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw bad();
        scaled = scaled * 10 + (ch - '0');
    }
    return {negative ? -scaled : scaled};
}

Decimal4 Decimal4::ceil_of(mpfr_srcptr v) {
    if (!mpfr_number_p(v)) throw DomainError("Decimal4::ceil_of: not a finite number");
    Mpfr scaled(Precision{mpfr_get_prec(v) + 32});
    mpfr_mul_ui(scaled.get(), v, 10000, MPFR_RNDU);
    mpfr_ceil(scaled.get(), scaled.get());
    if (!mpfr_fits_slong_p(scaled.get(), MPFR_RNDU)) throw DomainError("Decimal4::ceil_of: out of range");
    return {mpfr_get_si(scaled.get(), MPFR_RNDU)};
}

Decimal4 Decimal4::ceil_of(double v) {
    Mpfr m(Precision{64});
    mpfr_set_d(m.get(), v, MPFR_RNDN);  // exact
    return ceil_of(m.get());
}

std::string Decimal4::to_string() const {
    const std::uint64_t mag = scaled < 0 ? static_cast<std::uint64_t>(-scaled) : static_cast<std::uint64_t>(scaled);
    std::string frac = std::to_string(mag % 10000);
    frac.insert(0, 4 - frac.size(), '0');
    return (scaled < 0 ? "-" : "") + std::to_string(mag / 10000) + "." + frac;
}

Interval Decimal4::to_interval(Precision prec) const { return Interval::from_decimal(to_string(), prec); }

// -------------------------------------------------------- final constants

FinalConstants certify_constants(const LogArg& floor, const ConstantsOptions& options) {
    if (floor < LogArg::decimal_power(6)) throw DomainError("constants: floor must be >= 1e6, got " + floor.to_string());
    const std::string what = options.t ? "C(" + options.t->to_string() + ", " + floor.to_string() + ") > 0"
                                       : "C(t, " + floor.to_string() + ") > 0 for a bisected t";

    return with_precision_escalation(
        options.precision, options.max_precision, what, [&](Precision p) -> std::optional<FinalConstants> {
            Decimal4 t = options.t ? *options.t : Decimal4::ceil_of(min_t_for_positive_c(floor, options.tol, p));
            Interval c = c_func(t.to_interval(p), floor);
            // The bisected t is certified as a binary double; its decimal
            // ceiling can only be larger, but recheck and step if needed.
            for (int step = 0; !c.positive() && !options.t && step < 3; ++step) {
                t = t + Decimal4{1};
                c = c_func(t.to_interval(p), floor);
            }
            if (!c.positive()) return std::nullopt;

            const Interval ti = t.to_interval(p);
            Interval ub = u_majorant(ti, floor);
            const Decimal4 u = Decimal4::ceil_of(ub.hi());
            if (mpfr_cmp(u.to_interval(p).lo(), ub.hi()) < 0) return std::nullopt;

            FinalConstants out;
            out.floor = floor;
            out.t = t;
            out.u = u;
            out.v = -(t + u);
            out.c_at_t = std::move(c);
            out.u_bound = std::move(ub);
            out.precision = p;
            return out;
        });
}

FinalConstants emit_final_constants(const LogArg& frontier, const ConstantsOptions& options) {
    return certify_constants(frontier, options);
}

// ------------------------------------------------------------ stage bounds

StageBounds derive_stage(const LogArg& b_lo, const LogArg& b_hi, const StageOptions& options) {
    if (b_lo < LogArg::decimal_power(6)) throw InvalidArgument("derive_stage: B_lo must be >= 1e6, got " + b_lo.to_string());
    if (!(b_hi > b_lo)) throw InvalidArgument("derive_stage: B_hi must exceed B_lo");
    if (!(options.slack >= 0)) throw InvalidArgument("derive_stage: slack must be >= 0");

    return with_precision_escalation(
        options.precision, options.max_precision, "stage bounds for [" + b_lo.to_string() + ", " + b_hi.to_string() + "]",
        [&](Precision p) -> std::optional<StageBounds> {
            const double t = min_t_for_positive_c(b_lo, options.t_tol, p) + options.slack;
            const Interval ti = Interval::from_double(t, p);
            Interval c = c_func(ti, b_lo);
            if (!c.positive()) return std::nullopt;

            const Interval ub = u_majorant(ti, b_lo);
            const double u_const = ub.hi_up();
            const Interval ui = Interval::from_double(u_const, p);
            if (mpfr_cmp(ui.lo(), ub.hi()) < 0) return std::nullopt;

            Interval at = a_t_bound(ti, b_hi);
            StageBounds s;
            s.b_lo = b_lo;
            s.b_hi = b_hi;
            s.t = t;
            s.u_const = u_const;
            s.a_max = at.floor_hi();
            s.k_max = k_max_bound(ui, b_hi);
            s.certified = true;
            s.c_at_t = std::move(c);
            s.a_t = std::move(at);
            s.precision = p;
            return s;
        });
}

std::optional<std::int64_t> reference_a_max(const LogArg& b_lo, const LogArg& b_hi) {
    if (b_lo == LogArg::decimal_power(6) && b_hi == LogArg::decimal_power(1000)) return 3346;
    if (b_lo == LogArg::decimal_power(1000) && b_hi == LogArg::decimal_power(3000)) return 9993;
    return std::nullopt;
}

// ------------------------------------------------------------------ ladder

namespace {

bool usable_for(const ScanReport& r, std::int64_t k_max) {
    return r.spec.k_min <= 2 && static_cast<std::int64_t>(r.spec.k_max) >= k_max;
}

// Parts of [2, a_max] not completed by any usable report.
std::vector<ARange> missing_ranges(std::int64_t a_max, std::int64_t k_max, const std::vector<const ScanReport*>& pool) {
    std::vector<ARange> done;
    for (const ScanReport* r : pool) {
        if (usable_for(*r, k_max)) done.insert(done.end(), r->completed_ranges.begin(), r->completed_ranges.end());
    }
    std::sort(done.begin(), done.end(), [](ARange x, ARange y) { return x.start < y.start; });

    std::vector<ARange> gaps;
    std::uint64_t next = 2;
    const auto end = static_cast<std::uint64_t>(a_max);
    for (const ARange r : done) {
        if (next > end) break;
        if (r.start > next) gaps.push_back({next, std::min(end, r.start - 1)});
        next = std::max(next, r.end + 1);
    }
    if (next <= end) gaps.push_back({next, end});
    return gaps;
}

std::vector<ScanReport> fill_gaps(std::int64_t a_max, std::int64_t k_max, const std::vector<const ScanReport*>& pool,
                                  const LadderOptions& options) {
    std::vector<ScanReport> out;
    if (a_max < 2 || k_max < 2) return out;
    for (ARange gap : missing_ranges(a_max, k_max, pool)) {
        if (options.a_cap) {
            if (gap.start > *options.a_cap) continue;
            gap.end = std::min(gap.end, *options.a_cap);
        }
        ScanSpec spec = options.scan_options;
        spec.a_min = gap.start;
        spec.a_max = gap.end;
        spec.k_min = 2;
        spec.k_max = static_cast<unsigned>(k_max);
        spec.checkpoint_path.reset();
        spec.halt_after.reset();
        out.push_back(scan(spec));
    }
    return out;
}

bool is_known(const Hit& h, const std::vector<KnownSolution>& known) {
    return std::any_of(known.begin(), known.end(), [&](const KnownSolution& s) {
        return s.a == h.a() && s.k == h.k() && BigNat(s.b) == h.b();
    });
}

void evaluate(StageResult& stage, const std::vector<const ScanReport*>& pool, const LadderOptions& options) {
    const StageBounds& b = stage.bounds;
    stage.covered = b.a_max < 2 || b.k_max < 2 || missing_ranges(stage.scan_a_max, b.k_max, pool).empty();

    std::set<std::tuple<std::uint64_t, unsigned>> seen;
    for (const ScanReport* r : pool) {
        for (const auto* list : {&r->hits, &r->flagged_hits}) {
            for (const Hit& h : *list) {
                const LogArg hb = LogArg::exact(h.b());
                if (hb < b.b_lo || hb > b.b_hi || is_known(h, options.known)) continue;
                if (seen.insert({h.a(), h.k()}).second) stage.unexplained.push_back(h);
            }
        }
    }
    stage.verified = b.certified && stage.covered && stage.unexplained.empty();
}

}  // namespace

LadderReport run_ladder(const LadderOptions& options) {
    if (options.initial_floor < LogArg::decimal_power(6)) throw InvalidArgument("ladder: initial floor must be >= 1e6");
    for (std::size_t i = 0; i < options.stages.size(); ++i) {
        const auto& [lo, hi] = options.stages[i];
        const LogArg& expected = i == 0 ? options.initial_floor : options.stages[i - 1].second;
        if (lo != expected) {
            throw InvalidArgument("ladder: stage " + std::to_string(i + 1) + " starts at " + lo.to_string() +
                                  " but the verified floor is " + expected.to_string());
        }
        if (!(hi > lo)) throw InvalidArgument("ladder: stage " + std::to_string(i + 1) + " is empty");
    }

    LadderReport report;
    report.frontier = options.initial_floor;

    auto start_stage = [&](const std::pair<LogArg, LogArg>& range) {
        StageResult st;
        st.bounds = derive_stage(range.first, range.second, options.stage_options);
        st.scan_a_max = std::max(st.bounds.a_max, reference_a_max(range.first, range.second).value_or(0));
        return st;
    };
    auto base_pool = [&] {
        std::vector<const ScanReport*> pool;
        for (const auto& r : options.prior) pool.push_back(&r);
        for (const auto& r : report.global_scans) pool.push_back(&r);
        return pool;
    };

    if (options.global_scan) {
        std::vector<StageResult> derived;
        std::int64_t a_all = 0;
        std::int64_t k_all = 0;
        for (const auto& range : options.stages) {
            derived.push_back(start_stage(range));
            a_all = std::max(a_all, derived.back().scan_a_max);
            k_all = std::max(k_all, derived.back().bounds.k_max);
        }
        report.global_scans = fill_gaps(a_all, k_all, base_pool(), options);
        for (StageResult& st : derived) {
            evaluate(st, base_pool(), options);
            const bool ok = st.verified;
            if (ok) report.frontier = st.bounds.b_hi;
            report.stages.push_back(std::move(st));
            if (!ok) break;
        }
        return report;
    }

    for (const auto& range : options.stages) {
        StageResult st = start_stage(range);
        auto pool = base_pool();
        st.scans = fill_gaps(st.scan_a_max, st.bounds.k_max, pool, options);
        for (const auto& r : st.scans) pool.push_back(&r);
        evaluate(st, pool, options);
        const bool ok = st.verified;
        if (ok) report.frontier = st.bounds.b_hi;
        report.stages.push_back(std::move(st));
        if (!ok) break;
    }
    return report;
}

// -------------------------------------------------------------------- json

nlohmann::ordered_json constants_to_json(const FinalConstants& c) {
    nlohmann::ordered_json j;
    j["floor"] = c.floor.to_string();
    j["t"] = c.t.to_string();
    j["u"] = c.u.to_string();
    j["v"] = c.v.to_string();
    j["c_at_t"] = {{"lo", c.c_at_t.lo_down()}, {"hi", c.c_at_t.hi_up()}};
    j["u_bound_hi"] = c.u_bound.hi_up();
    j["precision_bits"] = c.precision.bits;
    return j;
}

nlohmann::ordered_json stage_bounds_to_json(const StageBounds& s) {
    nlohmann::ordered_json j;
    j["b_lo"] = s.b_lo.to_string();
    j["b_hi"] = s.b_hi.to_string();
    j["t"] = s.t;
    j["u_const"] = s.u_const;
    j["a_max"] = s.a_max;
    j["k_max"] = s.k_max;
    j["certified"] = s.certified;
    j["c_at_t_lo"] = s.c_at_t.lo_down();
    j["a_t_hi"] = s.a_t.hi_up();
    j["precision_bits"] = s.precision.bits;
    return j;
}

nlohmann::ordered_json ladder_report_to_json(const LadderReport& r) {
    nlohmann::ordered_json j;
    j["frontier"] = r.frontier.to_string();
    auto stages = nlohmann::ordered_json::array();
    for (const StageResult& st : r.stages) {
        nlohmann::ordered_json s;
        s["bounds"] = stage_bounds_to_json(st.bounds);
        s["scan_a_max"] = st.scan_a_max;
        s["covered"] = st.covered;
        s["verified"] = st.verified;
        auto unexplained = nlohmann::ordered_json::array();
        for (const Hit& h : st.unexplained) unexplained.push_back(hit_to_json(h));
        s["unexplained_hits"] = unexplained;
        auto scans = nlohmann::ordered_json::array();
        for (const ScanReport& sr : st.scans) scans.push_back(scan_report_to_json(sr));
        s["scans"] = scans;
        stages.push_back(s);
    }
    j["stages"] = stages;
    auto global = nlohmann::ordered_json::array();
    for (const ScanReport& sr : r.global_scans) global.push_back(scan_report_to_json(sr));
    j["global_scans"] = global;
    return j;
}

}  // namespace suranyi
