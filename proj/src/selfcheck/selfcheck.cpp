#include "suranyi/selfcheck.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "suranyi/bounds.hpp"
#include "suranyi/exact_arith.hpp"

namespace suranyi {

// ------------------------------------------------------------------ oracle

namespace oracle {

namespace {

constexpr mpfr_rnd_t N = MPFR_RNDN;

Mpfr like(const Mpfr& v) { return Mpfr(v.precision()); }

}  // namespace

Mpfr rational(long numerator, long denominator, Precision prec) {
    Mpfr out(prec);
    mpfr_set_si(out.get(), numerator, N);
    mpfr_div_si(out.get(), out.get(), denominator, N);
    return out;
}

// q = (2 lnln x + (t+1) ln2) / (ln2 ln x), plus the pieces it is built from.
struct Pieces {
    Mpfr l2, ll2, lx, llx, q;
};

static Pieces pieces(const Mpfr& t, const Mpfr& x) {
    const Precision prec = x.precision();
    Pieces p{Mpfr(prec), Mpfr(prec), Mpfr(prec), Mpfr(prec), Mpfr(prec)};
    mpfr_const_log2(p.l2.get(), N);
    mpfr_log(p.ll2.get(), p.l2.get(), N);
    mpfr_log(p.lx.get(), x.get(), N);
    mpfr_log(p.llx.get(), p.lx.get(), N);
    Mpfr num(prec);
    Mpfr tmp(prec);
    mpfr_add_ui(tmp.get(), t.get(), 1, N);
    mpfr_mul(tmp.get(), tmp.get(), p.l2.get(), N);
    mpfr_mul_ui(num.get(), p.llx.get(), 2, N);
    mpfr_add(num.get(), num.get(), tmp.get(), N);
    mpfr_mul(tmp.get(), p.l2.get(), p.lx.get(), N);
    mpfr_div(p.q.get(), num.get(), tmp.get(), N);
    return p;
}

Mpfr phi1(const Mpfr& t, const Mpfr& x) {
    const Pieces p = pieces(t, x);
    const Precision prec = x.precision();
    // tail = 1/(2x) + 1/(12 x^2)
    Mpfr tail(prec);
    Mpfr tmp(prec);
    mpfr_ui_div(tail.get(), 1, x.get(), N);
    mpfr_div_ui(tail.get(), tail.get(), 2, N);
    mpfr_sqr(tmp.get(), x.get(), N);
    mpfr_mul_ui(tmp.get(), tmp.get(), 12, N);
    mpfr_ui_div(tmp.get(), 1, tmp.get(), N);
    mpfr_add(tail.get(), tail.get(), tmp.get(), N);
    // factor = llx/l2 + t + 1 + ll2/l2 - q
    Mpfr factor(prec);
    mpfr_div(factor.get(), p.llx.get(), p.l2.get(), N);
    mpfr_add(factor.get(), factor.get(), t.get(), N);
    mpfr_add_ui(factor.get(), factor.get(), 1, N);
    mpfr_div(tmp.get(), p.ll2.get(), p.l2.get(), N);
    mpfr_add(factor.get(), factor.get(), tmp.get(), N);
    mpfr_sub(factor.get(), factor.get(), p.q.get(), N);

    Mpfr out(prec);
    mpfr_mul(out.get(), tail.get(), factor.get(), N);
    mpfr_div(out.get(), out.get(), p.lx.get(), N);
    mpfr_add(out.get(), out.get(), p.q.get(), N);
    mpfr_neg(out.get(), out.get(), N);
    return out;
}

Mpfr phi2(const Mpfr& t, const Mpfr& x) {
    const Pieces p = pieces(t, x);
    Mpfr inner = like(x);
    mpfr_mul(inner.get(), p.q.get(), p.l2.get(), N);
    mpfr_add(inner.get(), inner.get(), p.llx.get(), N);
    mpfr_sub(inner.get(), inner.get(), p.ll2.get(), N);
    Mpfr out = like(x);
    mpfr_mul(out.get(), p.q.get(), inner.get(), N);
    return out;
}

Mpfr c_func(const Mpfr& t, const Mpfr& x) {
    const Pieces p = pieces(t, x);
    Mpfr out = like(x);
    // t + 1 + (1 + 2 ll2)/l2
    mpfr_mul_ui(out.get(), p.ll2.get(), 2, N);
    mpfr_add_ui(out.get(), out.get(), 1, N);
    mpfr_div(out.get(), out.get(), p.l2.get(), N);
    mpfr_add(out.get(), out.get(), t.get(), N);
    mpfr_add_ui(out.get(), out.get(), 1, N);
    const Mpfr a = phi1(t, x);
    const Mpfr b = phi2(t, x);
    mpfr_add(out.get(), out.get(), a.get(), N);
    mpfr_sub(out.get(), out.get(), b.get(), N);
    return out;
}

Mpfr lgamma(const Mpfr& x) {
    Mpfr out = like(x);
    mpfr_lngamma(out.get(), x.get(), N);
    return out;
}

Mpfr digamma(const Mpfr& x) {
    Mpfr out = like(x);
    mpfr_digamma(out.get(), x.get(), N);
    return out;
}

}  // namespace oracle

// ------------------------------------------------------------ properties

namespace {

PropertyResult timed(std::string name, const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    PropertyResult result;
    result.name = std::move(name);
    try {
        result.detail = body();
        result.passed = result.detail.empty();
        if (result.passed) result.detail = "ok";
    } catch (const std::exception& e) {
        result.passed = false;
        result.detail = std::string("exception: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// lo > lower and hi <= upper, i.e. the enclosure sits in the decimal
// truncation window (lower, upper].
bool within(const Interval& v, const char* lower, const char* upper) {
    const Precision p = v.precision();
    return mpfr_greater_p(v.lo(), Interval::from_decimal(lower, p).hi()) &&
           mpfr_lessequal_p(v.hi(), Interval::from_decimal(upper, p).lo());
}

}  // namespace

PropertyResult check_constants_table(const SelfCheckOptions& opts) {
    return timed("constants_table", [&]() -> std::string {
        BoundConstants k = BoundConstants::compute(opts.precision);
        if (opts.corrupt_constants) k.t_thresh = k.t_thresh + Interval::from_decimal("0.01", opts.precision);
        std::string failed;
        if (!within(k.t_thresh, "-1.3852", "-1.3851")) failed += "t_thresh " + k.t_thresh.to_string(8) + "; ";
        if (!within(k.u_thresh, "-0.9140", "-0.9139")) failed += "u_thresh " + k.u_thresh.to_string(8) + "; ";
        if (!(mpfr_cmp_d(k.v_thresh.lo(), 2.299) >= 0 && mpfr_cmp_d(k.v_thresh.hi(), 2.300) < 0)) {
            failed += "v_thresh " + k.v_thresh.to_string(8) + "; ";
        }
        return failed;
    });
}

PropertyResult check_valuation_oracle(const SelfCheckOptions& opts) {
    return timed("valuation_oracle", [&]() -> std::string {
        for (std::uint64_t p : {2, 3, 5, 7, 11}) {
            for (std::uint64_t n = 0; n <= opts.valuation_n_max; ++n) {
                const BigNat bn(n);
                if (legendre_valuation(bn, p) != legendre_valuation_oracle(bn, p)) {
                    return "mismatch at n=" + std::to_string(n) + " p=" + std::to_string(p);
                }
            }
        }
        return {};
    });
}

PropertyResult check_digit_sum_bound(const SelfCheckOptions& opts) {
    return timed("digit_sum_bound", [&]() -> std::string {
        const Precision prec = opts.precision;
        std::vector<Interval> scale;  // (a-1)/ln a, indexed by a
        for (std::int64_t a = 0; a <= 10; ++a) {
            scale.push_back(a < 2 ? Interval(prec) : (a - 1) / ln(Interval::from_int(a, prec)));
        }
        for (std::uint64_t n = 0; n <= opts.digit_sum_n_max; ++n) {
            const Interval ln_n1 = ln(Interval::from_int(static_cast<std::int64_t>(n) + 1, prec));
            for (std::uint64_t a = 2; a <= 10; ++a) {
                const std::uint64_t s = digit_sum(BigNat(n), a);
                const Interval bound = scale[a] * ln_n1;
                if (mpfr_cmp_ui(bound.hi(), s) < 0) {
                    return "s_" + std::to_string(a) + "(" + std::to_string(n) + ")=" + std::to_string(s) +
                           " exceeds " + bound.to_string(10);
                }
            }
        }
        return {};
    });
}

PropertyResult check_root_bracketing(const SelfCheckOptions& opts) {
    return timed("kth_root_bracketing", [&]() -> std::string {
        gmp_randclass bits(gmp_randinit_default);
        bits.seed(static_cast<unsigned long>(opts.seed));
        std::mt19937_64 rng(opts.seed);
        for (int i = 0; i < opts.root_samples; ++i) {
            const BigNat m = BigNat(mpz_class(bits.get_z_bits(512))) + BigNat(1);
            const auto k = static_cast<unsigned>(2 + rng() % 11);
            const BigNat r = kth_root_floor(m, k);
            if (!(BigNat::pow(r, k) <= m && m < BigNat::pow(r + BigNat(1), k))) {
                return "bracketing fails for k=" + std::to_string(k) + " m=" + m.to_string();
            }
        }
        return {};
    });
}

PropertyResult check_interval_containment(const SelfCheckOptions& opts) {
    return timed("interval_containment", [&]() -> std::string {
        const Precision prec = opts.precision;
        const Precision ref{prec.bits * 4};
        std::mt19937_64 rng(opts.seed);
        auto uniform = [&rng](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
        // Random rational p/q: a working-precision enclosure and the reference value.
        struct Sample {
            Interval iv;
            Mpfr ref;
        };
        auto rational = [&](long p, long q) {
            return Sample{Interval::from_int(p, prec) / Interval::from_int(q, prec), oracle::rational(p, q, ref)};
        };
        auto scalar = [&](int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t), const Mpfr& a, const Mpfr& b) {
            Mpfr out(ref);
            op(out.get(), a.get(), b.get(), MPFR_RNDN);
            return out;
        };
        auto unary = [&](int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t), const Mpfr& a) {
            Mpfr out(ref);
            op(out.get(), a.get(), MPFR_RNDN);
            return out;
        };

        static const char* const kinds[] = {"add", "sub",     "mul",     "div",  "ln",   "exp",
                                            "pow", "lgamma", "digamma", "phi1", "phi2", "c_func"};
        for (int i = 0; i < opts.containment_samples; ++i) {
            const int kind = static_cast<int>(rng() % 12);
            Interval got(prec);
            Mpfr want(ref);
            switch (kind) {
                case 0: case 1: case 2: case 3: {
                    const Sample a = rational(uniform(-1'000'000, 1'000'000), uniform(1, 10'000));
                    long bp = uniform(-1'000'000, 1'000'000);
                    if (kind == 3 && bp == 0) bp = 1;
                    const Sample b = rational(bp, uniform(1, 10'000));
                    if (kind == 0) { got = a.iv + b.iv; want = scalar(mpfr_add, a.ref, b.ref); }
                    if (kind == 1) { got = a.iv - b.iv; want = scalar(mpfr_sub, a.ref, b.ref); }
                    if (kind == 2) { got = a.iv * b.iv; want = scalar(mpfr_mul, a.ref, b.ref); }
                    if (kind == 3) { got = a.iv / b.iv; want = scalar(mpfr_div, a.ref, b.ref); }
                    break;
                }
                case 4: {
                    const Sample a = rational(uniform(1, 1'000'000'000), uniform(1, 10'000));
                    got = ln(a.iv);
                    want = unary(mpfr_log, a.ref);
                    break;
                }
                case 5: {
                    const Sample a = rational(uniform(-50'000, 50'000), uniform(1'000, 10'000));
                    got = exp(a.iv);
                    want = unary(mpfr_exp, a.ref);
                    break;
                }
                case 6: {
                    const Sample a = rational(uniform(-100'000, 100'000), uniform(1, 10'000));
                    const auto n = static_cast<unsigned>(uniform(0, 12));
                    got = pow(a.iv, n);
                    mpfr_pow_ui(want.get(), a.ref.get(), n, MPFR_RNDN);
                    break;
                }
                case 7: {
                    const Sample a = rational(uniform(1, 10'000'000), uniform(1, 1'000));
                    got = lgamma_bracket(a.iv);
                    want = oracle::lgamma(a.ref);
                    break;
                }
                case 8: {
                    const long q = uniform(1, 1'000);
                    const Sample a = rational(uniform(q, 1'000'000 * q), q);
                    got = digamma_bracket(a.iv);
                    want = oracle::digamma(a.ref);
                    break;
                }
                default: {
                    const Sample t = rational(uniform(-13'800, 40'000), 10'000);
                    const long q = uniform(1, 100);
                    const Sample x = rational(uniform(35 * q, 1'000'000'000L), q);
                    if (kind == 9) { got = phi1(t.iv, x.iv); want = oracle::phi1(t.ref, x.ref); }
                    if (kind == 10) { got = phi2(t.iv, x.iv); want = oracle::phi2(t.ref, x.ref); }
                    if (kind == 11) { got = c_func(t.iv, x.iv); want = oracle::c_func(t.ref, x.ref); }
                    break;
                }
            }
            if (!got.contains(want.get())) {
                std::ostringstream os;
                os << kinds[kind] << " sample " << i << ": enclosure " << got.to_string(25)
                   << " misses reference " << mpfr_get_d(want.get(), MPFR_RNDN);
                return os.str();
            }
        }
        return {};
    });
}

PropertyResult check_lgamma_factorials(const SelfCheckOptions& opts) {
    return timed("lgamma_contains_ln_factorial", [&]() -> std::string {
        const Precision prec = opts.precision;
        Interval sum = Interval::from_int(0, prec);  // ln(n!) as an interval sum
        for (std::uint64_t n = 1; n <= opts.lgamma_n_max; ++n) {
            if (n >= 2) sum = sum + ln(Interval::from_int(static_cast<std::int64_t>(n), prec));
            const Interval bracket = lgamma_bracket(Interval::from_int(static_cast<std::int64_t>(n) + 1, prec));
            if (!bracket.contains(sum)) {
                return "n=" + std::to_string(n) + ": " + bracket.to_string(12) + " does not contain " + sum.to_string(12);
            }
        }
        return {};
    });
}

PropertyResult check_r_monotonicity(const SelfCheckOptions& opts) {
    return timed("r_monotone_in_a", [&]() -> std::string {
        for (std::int64_t b : {1'000, 10'000, 100'000, 1'000'000}) {
            for (std::int64_t a : {2, 5, 10, 50, 100, 1000}) {
                if (a >= b) continue;
                const Interval here = r_value(a, b, opts.precision);
                const Interval next = r_value(a + 1, b, opts.precision);
                if (!mpfr_greater_p(next.lo(), here.hi())) {
                    return "R(" + std::to_string(a + 1) + "," + std::to_string(b) + ") not above R(" +
                           std::to_string(a) + "," + std::to_string(b) + ")";
                }
            }
        }
        return {};
    });
}

PropertyResult check_known_solution_eq3(const SelfCheckOptions& opts) {
    return timed("c_lower_bound_at_6_7", [&]() -> std::string {
        const Interval bound = eq3_lower_c(6, 7, opts.precision);
        std::string failed;
        if (!(mpfr_cmp_ui(bound.hi(), 10) < 0)) failed += "eq3(6,7).hi >= 10 " + bound.to_string(10) + "; ";
        // 14 - log2(7) - 3
        Mpfr ref(Precision{opts.precision.bits * 4});
        mpfr_set_ui(ref.get(), 7, MPFR_RNDN);
        mpfr_log2(ref.get(), ref.get(), MPFR_RNDN);
        mpfr_ui_sub(ref.get(), 11, ref.get(), MPFR_RNDN);
        if (!bound.contains(ref.get())) failed += "eq3(6,7) misses 11 - log2 7; ";
        const Interval r = r_value(6, 7, opts.precision);
        if (!(mpfr_sgn(r.hi()) < 0)) failed += "R(6,7) not certified negative " + r.to_string(10) + "; ";
        return failed;
    });
}

std::vector<PropertyResult> run_self_checks(const SelfCheckOptions& opts) {
    return {check_constants_table(opts),      check_valuation_oracle(opts),   check_digit_sum_bound(opts),
            check_root_bracketing(opts),      check_interval_containment(opts), check_lgamma_factorials(opts),
            check_r_monotonicity(opts),       check_known_solution_eq3(opts)};
}

}  // namespace suranyi
