#include "suranyi/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "suranyi/checkpoint.hpp"
#include "suranyi/errors.hpp"
#include "suranyi/exact_arith.hpp"
#include "suranyi/ladder.hpp"
#include "suranyi/search.hpp"
#include "suranyi/selfcheck.hpp"

namespace suranyi {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kFloorAssumption = "B ≥ 10⁶ from prior verification";
constexpr const char* kDefaultStages = "1e6:1e1000,1e1000:1e3000";

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Globals {
    int precision_bits = 256;
    int max_precision_bits = 4096;
    unsigned workers = default_workers();
    std::size_t digit_cap = kDefaultDigitCap;
    std::uint64_t block_size = 64;
    std::vector<std::string> known{"6,3,7"};
    bool no_known = false;
    std::string out;
    std::string csv;
};

struct ScanArgs {
    std::uint64_t a_min = 2;
    std::uint64_t a_max = 0;
    unsigned k_min = 2;
    unsigned k_max = 12;
    std::string checkpoint;
    std::optional<std::uint64_t> halt_after;
};

struct ConstantsArgs {
    std::string bmin;
    std::string t;
    double tol = 1e-9;
};

struct LadderArgs {
    std::string stages = kDefaultStages;
    std::optional<std::uint64_t> a_cap;
    bool global_scan = false;
    std::vector<std::string> prior;
    double t_tol = 1e-4;
    double slack = 1e-4;
};

struct WindowArgs {
    unsigned k_min = 2;
    unsigned k_max = 12;
};

struct SelftestArgs {
    bool quick = false;
    bool corrupt_constants = false;
};

// The pieces of a report that a command fills in.
struct Outcome {
    json result;
    json args;
    std::vector<std::string> assumptions;
    int exit_code = kExitOk;
};

std::vector<KnownSolution> parse_known(const Globals& g) {
    std::vector<KnownSolution> out;
    if (g.no_known) return out;
    for (const std::string& text : g.known) {
        KnownSolution s{};
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> s.a >> c1 >> s.k >> c2 >> s.b) || c1 != ',' || c2 != ',' || in.peek() != EOF) {
            throw InvalidArgument("--known expects A,k,B, got '" + text + "'");
        }
        out.push_back(s);
    }
    return out;
}

Precision precision_of(const Globals& g) {
    if (g.precision_bits < 32) throw InvalidArgument("--precision must be >= 32 bits");
    if (g.precision_bits > g.max_precision_bits) throw InvalidArgument("--precision exceeds --max-precision");
    return Precision{g.precision_bits};
}

std::vector<std::pair<LogArg, LogArg>> parse_stages(const std::string& text) {
    std::vector<std::pair<LogArg, LogArg>> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        const auto colon = item.find(':');
        if (colon == std::string::npos || item.find(':', colon + 1) != std::string::npos) {
            throw InvalidArgument("--stages expects LO:HI[,LO:HI...], got '" + item + "'");
        }
        out.emplace_back(LogArg::parse(item.substr(0, colon)), LogArg::parse(item.substr(colon + 1)));
        pos = comma + 1;
    }
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

ScanSpec scan_spec_from(const Globals& g) {
    ScanSpec s;
    s.workers = g.workers;
    s.block_size = g.block_size;
    s.digit_cap = g.digit_cap;
    return s;
}

bool is_known(const Hit& h, const std::vector<KnownSolution>& known) {
    return std::any_of(known.begin(), known.end(),
                       [&](const KnownSolution& s) { return s.a == h.a() && s.k == h.k() && BigNat(s.b) == h.b(); });
}

// ------------------------------------------------------------------ scan

Outcome cmd_scan(const Globals& g, const ScanArgs& a, std::ostream& err) {
    ScanSpec spec = scan_spec_from(g);
    spec.a_min = a.a_min;
    spec.a_max = a.a_max;
    spec.k_min = a.k_min;
    spec.k_max = a.k_max;
    spec.halt_after = a.halt_after;
    spec.validate();
    const auto known = parse_known(g);

    ScanReport report;
    if (!a.checkpoint.empty() && std::filesystem::exists(a.checkpoint)) {
        const CheckpointHeader h = read_checkpoint(a.checkpoint).header;
        if (h != CheckpointHeader{spec.a_min, spec.a_max, spec.k_min, spec.k_max}) {
            throw Error("checkpoint " + a.checkpoint + " belongs to a different scan (" + format_header_line(h) + ")");
        }
        err << "resuming from " << a.checkpoint << "\n";
        report = resume(a.checkpoint, spec);
    } else {
        if (!a.checkpoint.empty()) spec.checkpoint_path = a.checkpoint;
        report = scan(spec);
    }

    Outcome o;
    o.args = {{"a-min", a.a_min}, {"a-max", a.a_max}, {"k-min", a.k_min}, {"k-max", a.k_max}};
    if (!a.checkpoint.empty()) o.args["checkpoint"] = a.checkpoint;
    o.result = scan_report_to_json(report);
    json fresh = json::array();
    for (const Hit& h : report.hits) {
        if (!is_known(h, known)) fresh.push_back(hit_to_json(h));
    }
    o.result["new_hits"] = fresh;

    if (!g.csv.empty()) {
        std::ofstream csv(g.csv);
        if (!csv) throw IoError("cannot write " + g.csv);
        csv << "A,k,B,C,b_below_a\n";
        for (const auto* list : {&report.hits, &report.flagged_hits}) {
            for (const Hit& h : *list) {
                csv << h.a() << ',' << h.k() << ',' << h.b().to_string() << ','
                    << (h.b() + BigNat(h.k())).to_string() << ',' << (h.b_below_a() ? 1 : 0) << '\n';
            }
        }
    }

    err << "scanned A in [" << spec.a_min << ", " << spec.a_max << "], k in [" << spec.k_min << ", " << spec.k_max
        << "]: " << report.hits.size() << " hit(s), " << fresh.size() << " new, " << report.flagged_hits.size()
        << " flagged (B < A)" << (report.complete() ? "" : ", incomplete") << " in " << report.stats.elapsed_s << " s\n";
    o.exit_code = fresh.empty() ? kExitOk : kExitNewHit;
    return o;
}

// ------------------------------------------------------------- constants

Outcome cmd_constants(const Globals& g, const ConstantsArgs& a, std::ostream& err) {
    ConstantsOptions opts;
    opts.precision = precision_of(g);
    opts.max_precision = Precision{g.max_precision_bits};
    opts.tol = a.tol;
    if (!(a.tol > 0)) throw InvalidArgument("--tol must be > 0");
    if (!a.t.empty()) opts.t = Decimal4::parse(a.t);
    const LogArg floor = LogArg::parse(a.bmin);

    const FinalConstants c = certify_constants(floor, opts);
    Outcome o;
    o.args = {{"bmin", a.bmin}, {"tol", a.tol}};
    if (!a.t.empty()) o.args["t"] = a.t;
    o.result = constants_to_json(c);
    err << "B >= " << floor.to_string() << ": t = " << c.t.to_string() << ", u = " << c.u.to_string()
        << ", v = " << c.v.to_string() << " (C(t) lo = " << c.c_at_t.lo_down() << ")\n";
    return o;
}

// ---------------------------------------------------------------- ladder

Outcome cmd_ladder(const Globals& g, const LadderArgs& a, std::ostream& err) {
    LadderOptions opts;
    opts.stages = parse_stages(a.stages);
    opts.known = parse_known(g);
    opts.a_cap = a.a_cap;
    opts.global_scan = a.global_scan;
    opts.scan_options = scan_spec_from(g);
    opts.stage_options.precision = precision_of(g);
    opts.stage_options.max_precision = Precision{g.max_precision_bits};
    opts.stage_options.t_tol = a.t_tol;
    opts.stage_options.slack = a.slack;
    if (!(a.t_tol > 0)) throw InvalidArgument("--t-tol must be > 0");

    Outcome o;
    o.assumptions.push_back(kFloorAssumption);
    for (const std::string& path : a.prior) {
        json doc = read_json_file(path);
        const json& body = doc.contains("result") ? doc.at("result") : doc;
        opts.prior.push_back(scan_report_from_json(nlohmann::json::parse(body.dump())));
        o.assumptions.push_back("A-range coverage from prior scan report " + path);
    }

    const LadderReport r = run_ladder(opts);
    ConstantsOptions copts;
    copts.precision = opts.stage_options.precision;
    copts.max_precision = opts.stage_options.max_precision;
    const FinalConstants fc = emit_final_constants(r.frontier, copts);

    o.args = {{"stages", a.stages}, {"t-tol", a.t_tol}, {"slack", a.slack}};
    if (a.a_cap) o.args["a-cap"] = *a.a_cap;
    if (a.global_scan) o.args["global-scan"] = true;
    if (!a.prior.empty()) o.args["prior"] = a.prior;
    o.result = ladder_report_to_json(r);
    o.result["final_constants"] = constants_to_json(fc);

    bool unexplained = false;
    bool incomplete = r.stages.size() < opts.stages.size();
    for (const StageResult& st : r.stages) {
        err << "stage [" << st.bounds.b_lo.to_string() << ", " << st.bounds.b_hi.to_string() << "]: A_max "
            << st.bounds.a_max << " (scanned to " << st.scan_a_max << "), k_max " << st.bounds.k_max << ", "
            << (st.verified ? "verified" : st.covered ? "HIT IN RANGE" : "coverage incomplete") << "\n";
        unexplained = unexplained || !st.unexplained.empty();
        incomplete = incomplete || !st.verified;
    }
    err << "frontier B >= " << r.frontier.to_string() << ": t = " << fc.t.to_string() << ", u = " << fc.u.to_string()
        << ", v = " << fc.v.to_string() << "\n";
    o.exit_code = unexplained ? kExitNewHit : incomplete ? kExitError : kExitOk;
    return o;
}

// ----------------------------------------------------------- window-cert

json coeff_json(const mpz_class& c) {
    if (mpz_fits_slong_p(c.get_mpz_t())) return c.get_si();
    return c.get_str();
}

Outcome cmd_window_cert(const WindowArgs& a, std::ostream& err) {
    if (a.k_min < 2 || a.k_max < a.k_min || a.k_max > 64) {
        throw InvalidArgument("window-cert needs 2 <= --k-min <= --k-max <= 64");
    }
    Outcome o;
    o.args = {{"k-min", a.k_min}, {"k-max", a.k_max}};
    json certs = json::array();
    bool all_in_range = true;
    std::vector<unsigned> failed_outside;
    for (unsigned k = a.k_min; k <= a.k_max; ++k) {
        const PolynomialCertificate c = lemma5_window_certificate(k);
        const bool in_range = k <= 12;
        json coeffs = json::array();
        std::string signs;
        for (const auto& x : c.coeffs) {
            coeffs.push_back(coeff_json(x));
            signs += sgn(x) > 0 ? '+' : sgn(x) < 0 ? '-' : '0';
        }
        certs.push_back({{"k", k},
                         {"coeffs", coeffs},
                         {"signs", signs},
                         {"value_at_1", coeff_json(c.evaluate(1))},
                         {"verified", c.verified},
                         {"in_certified_range", in_range}});
        err << "k=" << k << " signs " << signs << " Q(1)=" << c.evaluate(1).get_str() << " "
            << (c.verified ? "verified" : "FAILED") << (in_range ? "" : " (informational)") << "\n";
        if (!c.verified) {
            if (in_range) {
                all_in_range = false;
            } else {
                failed_outside.push_back(k);
            }
        }
    }
    o.result = {{"certificates", certs}, {"all_verified_in_range", all_in_range}, {"failed_outside_range", failed_outside}};
    o.exit_code = all_in_range ? kExitOk : kExitError;
    return o;
}

// -------------------------------------------------------------- selftest

Outcome cmd_selftest(const Globals& g, const SelftestArgs& a, std::ostream& err) {
    SelfCheckOptions opts;
    opts.precision = precision_of(g);
    opts.corrupt_constants = a.corrupt_constants;
    if (a.quick) {
        opts.valuation_n_max = 10'000;
        opts.digit_sum_n_max = 100'000;
        opts.root_samples = 200;
        opts.containment_samples = 1'000;
    }
    const auto results = run_self_checks(opts);
    Outcome o;
    o.args = json::object();
    if (a.quick) o.args["quick"] = true;
    if (a.corrupt_constants) o.args["corrupt-constants"] = true;
    json props = json::array();
    bool ok = true;
    for (const PropertyResult& r : results) {
        props.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        err << (r.passed ? "pass " : "FAIL ") << r.name << " (" << r.seconds << " s)"
            << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
        ok = ok && r.passed;
    }
    o.result = {{"properties", props}, {"passed", ok}};
    o.exit_code = ok ? kExitOk : kExitError;
    return o;
}

json config_json(const Globals& g, const json& args) {
    json c;
    c["precision_bits"] = g.precision_bits;
    c["max_precision_bits"] = g.max_precision_bits;
    c["workers"] = g.workers;
    c["digit_cap"] = g.digit_cap;
    c["block_size"] = g.block_size;
    c["known"] = g.no_known ? std::vector<std::string>{} : g.known;
    c["args"] = args;
    return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();

    CLI::App app{"Exact search and certified bounds for A! B! = C!", "suranyi"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--precision", g.precision_bits, "working precision in bits")
        ->envname("SURANYI_PRECISION_BITS")
        ->capture_default_str();
    app.add_option("--max-precision", g.max_precision_bits, "precision cap for escalation")->capture_default_str();
    app.add_option("--workers", g.workers, "scan threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--digit-cap", g.digit_cap, "largest factorial, in decimal digits")->capture_default_str();
    app.add_option("--block-size", g.block_size, "A values per work block")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--known", g.known, "known solution A,k,B (repeatable)")->capture_default_str();
    app.add_flag("--no-known", g.no_known, "treat every hit as new");
    app.add_option("--out", g.out, "write the JSON report here");
    app.add_option("--csv", g.csv, "write scan hits as CSV here");

    ScanArgs sa;
    auto* scan_cmd = app.add_subcommand("scan", "exhaustive (A, k) search");
    scan_cmd->add_option("--a-min", sa.a_min)->capture_default_str();
    scan_cmd->add_option("--a-max", sa.a_max)->required();
    scan_cmd->add_option("--k-min", sa.k_min)->capture_default_str();
    scan_cmd->add_option("--k-max", sa.k_max)->capture_default_str();
    scan_cmd->add_option("--checkpoint", sa.checkpoint, "checkpoint file; resumed if it exists");
    scan_cmd->add_option("--halt-after", sa.halt_after)->group("");

    ConstantsArgs ca;
    auto* const_cmd = app.add_subcommand("constants", "certify t, u, v for B >= bmin");
    const_cmd->add_option("--bmin", ca.bmin, "floor, e.g. 1e1000")->required();
    const_cmd->add_option("--t", ca.t, "t to certify (at most 4 decimals); bisected if omitted");
    const_cmd->add_option("--tol", ca.tol, "bisection tolerance")->capture_default_str();

    LadderArgs la;
    auto* ladder_cmd = app.add_subcommand("ladder", "derive stage bounds, scan, chain");
    ladder_cmd->add_option("--stages", la.stages, "LO:HI[,LO:HI...]")->capture_default_str();
    ladder_cmd->add_option("--a-cap", la.a_cap, "never scan past this A");
    ladder_cmd->add_flag("--global-scan", la.global_scan, "one scan over the union of stage boxes");
    ladder_cmd->add_option("--prior", la.prior, "scan report JSON counted as coverage (repeatable)");
    ladder_cmd->add_option("--t-tol", la.t_tol)->capture_default_str();
    ladder_cmd->add_option("--slack", la.slack)->capture_default_str();

    WindowArgs wa;
    auto* window_cmd = app.add_subcommand("window-cert", "polynomial certificates of the candidate window");
    window_cmd->add_option("--k-min", wa.k_min)->capture_default_str();
    window_cmd->add_option("--k-max", wa.k_max)->capture_default_str();

    SelftestArgs ta;
    auto* self_cmd = app.add_subcommand("selftest", "embedded property suites");
    self_cmd->add_flag("--quick", ta.quick, "reduced sample sizes");
    self_cmd->add_flag("--corrupt-constants", ta.corrupt_constants)->group("");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Outcome o;
    std::string command;
    try {
        if (*scan_cmd) {
            command = "scan";
            o = cmd_scan(g, sa, err);
        } else if (*const_cmd) {
            command = "constants";
            o = cmd_constants(g, ca, err);
        } else if (*ladder_cmd) {
            command = "ladder";
            o = cmd_ladder(g, la, err);
        } else if (*window_cmd) {
            command = "window-cert";
            o = cmd_window_cert(wa, err);
        } else {
            command = "selftest";
            o = cmd_selftest(g, ta, err);
        }
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CertificationFailure& e) {
        err << "certification failed: " << e.what() << "\n";
        return kExitCertification;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    if (std::find(o.assumptions.begin(), o.assumptions.end(), kFloorAssumption) == o.assumptions.end()) {
        o.assumptions.insert(o.assumptions.begin(), kFloorAssumption);
    }
    json report;
    report["schema"] = "v1";
    report["command"] = command;
    report["config"] = config_json(g, o.args);
    report["result"] = o.result;
    report["assumptions"] = o.assumptions;
    report["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string text = report.dump(2) + "\n";
    if (g.out.empty()) {
        out << text;
    } else {
        std::ofstream f(g.out);
        if (!(f << text)) {
            err << "error: cannot write " << g.out << "\n";
            return kExitError;
        }
    }
    return o.exit_code;
}

std::vector<std::string> args_from_report(const nlohmann::json& report) {
    const auto& c = report.at("config");
    std::vector<std::string> out;
    auto num = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    out.insert(out.end(), {"--precision", num(c.at("precision_bits"))});
    out.insert(out.end(), {"--max-precision", num(c.at("max_precision_bits"))});
    out.insert(out.end(), {"--workers", num(c.at("workers"))});
    out.insert(out.end(), {"--digit-cap", num(c.at("digit_cap"))});
    out.insert(out.end(), {"--block-size", num(c.at("block_size"))});
    if (c.at("known").empty()) {
        out.push_back("--no-known");
    } else {
        for (const auto& k : c.at("known")) out.insert(out.end(), {"--known", k.get<std::string>()});
    }
    out.push_back(report.at("command").get<std::string>());
    for (const auto& [key, value] : c.at("args").items()) {
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back("--" + key);
        } else if (value.is_array()) {
            for (const auto& item : value) out.insert(out.end(), {"--" + key, num(item)});
        } else if (!value.is_null()) {
            out.insert(out.end(), {"--" + key, num(value)});
        }
    }
    return out;
}

}  // namespace suranyi
