#include "suranyi/bounds.hpp"

#include <cmath>

namespace suranyi {

namespace {

Interval const_interval(int (*fn)(mpfr_ptr, mpfr_rnd_t), Precision prec) {
    Mpfr lo(prec);
    Mpfr hi(prec);
    fn(lo.get(), MPFR_RNDD);
    fn(hi.get(), MPFR_RNDU);
    return Interval::from_endpoints(lo.get(), hi.get(), prec);
}

// x(ln x - 1) + (ln 2pi - ln x)/2, the Stirling floor of logGamma.
Interval stirling_floor(const Interval& x, const Interval& ln_2pi) {
    const Interval lx = ln(x);
    return x * (lx - 1) + (ln_2pi - lx) / 2;
}

Interval point(mpfr_srcptr v, Precision prec) { return Interval::from_endpoints(v, v, prec); }

void require_at_least(const Interval& x, long bound, const char* what) {
    if (mpfr_cmp_si(x.lo(), bound) < 0) {
        throw DomainError(std::string(what) + ": argument " + x.to_string(8) + " below " + std::to_string(bound));
    }
}

}  // namespace

BoundConstants BoundConstants::compute(Precision prec) {
    Interval ln2 = const_interval(mpfr_const_log2, prec);
    Interval lnln2 = ln(ln2);
    Interval pi = const_interval(mpfr_const_pi, prec);
    Interval ln_2pi = ln2 + ln(pi);
    Interval ln10 = LogArg::decimal_power(1).ln(prec);
    Interval t_thresh = Interval::from_int(-1, prec) - (2 * lnln2 + 1) / ln2;
    Interval u_thresh = -((lnln2 + 1) / ln2);
    Interval v_thresh = (3 * lnln2 + 2) / ln2 + 1;
    return BoundConstants{std::move(ln2),    std::move(lnln2),    std::move(pi),
                          std::move(ln_2pi), std::move(ln10),     std::move(t_thresh),
                          std::move(u_thresh), std::move(v_thresh)};
}

LogTerms LogTerms::of(const LogArg& x, Precision prec) {
    if (x < LogArg::exact(BigNat(35))) throw DomainError("x must be >= 35, got " + x.to_string());
    Interval lx = x.ln(prec);
    Interval llx = ln(lx);
    return LogTerms{x.reciprocal(prec), std::move(lx), std::move(llx)};
}

LogTerms LogTerms::of(const Interval& x) {
    require_at_least(x, 35, "phi");
    Interval lx = ln(x);
    Interval llx = ln(lx);
    return LogTerms{1 / x, std::move(lx), std::move(llx)};
}

// ------------------------------------------------------- logGamma and Psi

Interval lgamma_bracket(const Interval& x) {
    if (!x.positive()) throw DomainError("lgamma_bracket: argument " + x.to_string(8) + " touches <= 0");
    const Precision prec = x.precision();

    if (mpfr_cmp_ui(x.lo(), 10) >= 0) {
        const Interval ln_2pi = BoundConstants::compute(prec).ln_2pi;
        const Interval at_lo = stirling_floor(point(x.lo(), prec), ln_2pi);
        const Interval x_hi = point(x.hi(), prec);
        const Interval at_hi = stirling_floor(x_hi, ln_2pi) + 1 / (12 * x_hi);
        return Interval::from_endpoints(at_lo.lo(), at_hi.hi(), prec);
    }

    // Lift past 10: logGamma(x) = logGamma(x + n) - sum_{i<n} ln(x + i).
    const auto n = static_cast<std::int64_t>(std::ceil(10.0 - x.lo_down()));
    Interval correction = Interval::from_int(0, prec);
    for (std::int64_t i = 0; i < n; ++i) correction = correction + ln(x + i);
    return lgamma_bracket(x + n) - correction;
}

Interval digamma_bracket(const Interval& x) {
    require_at_least(x, 1, "digamma_bracket");
    const Precision prec = x.precision();
    // Both bracket sides are increasing in x, so endpoints suffice.
    const Interval lo = point(x.lo(), prec);
    const Interval hi = point(x.hi(), prec);
    const Interval lower = ln(lo) - 1 / (2 * lo) - 1 / (12 * sqr(lo));
    const Interval upper = ln(hi) - 1 / (2 * hi);
    return Interval::from_endpoints(lower.lo(), upper.hi(), prec);
}

// ------------------------------------------------------------ phi and C

namespace {

struct PhiParts {
    BoundConstants k;
    Interval q;  // (2 lnln x + (t+1) ln2) / (ln2 ln x)
};

PhiParts phi_parts(const Interval& t, const LogTerms& x) {
    BoundConstants k = BoundConstants::compute(t.precision());
    Interval q = (2 * x.lnln_x + (t + 1) * k.ln2) / (k.ln2 * x.ln_x);
    return PhiParts{std::move(k), std::move(q)};
}

}  // namespace

Interval phi1(const Interval& t, const LogTerms& x) {
    const auto [k, q] = phi_parts(t, x);
    const Interval tail = x.inv_x / 2 + sqr(x.inv_x) / 12;
    const Interval factor = x.lnln_x / k.ln2 + t + 1 + k.lnln2 / k.ln2 - q;
    return -q - tail * factor / x.ln_x;
}

Interval phi2(const Interval& t, const LogTerms& x) {
    const auto [k, q] = phi_parts(t, x);
    return q * (x.lnln_x - k.lnln2 + q * k.ln2);
}

Interval c_func(const Interval& t, const LogTerms& x) {
    const BoundConstants k = BoundConstants::compute(t.precision());
    return t + 1 + (2 * k.lnln2 + 1) / k.ln2 + phi1(t, x) - phi2(t, x);
}

Interval phi1(const Interval& t, const LogArg& x) { return phi1(t, LogTerms::of(x, t.precision())); }
Interval phi1(const Interval& t, const Interval& x) { return phi1(t, LogTerms::of(x)); }
Interval phi2(const Interval& t, const LogArg& x) { return phi2(t, LogTerms::of(x, t.precision())); }
Interval phi2(const Interval& t, const Interval& x) { return phi2(t, LogTerms::of(x)); }
Interval c_func(const Interval& t, const LogArg& x) { return c_func(t, LogTerms::of(x, t.precision())); }
Interval c_func(const Interval& t, const Interval& x) { return c_func(t, LogTerms::of(x)); }

Interval u_majorant(const Interval& t, const LogArg& x) {
    return BoundConstants::compute(t.precision()).u_thresh + phi2(t, x);
}

// ------------------------------------------------------ A_t, k_max, Eq. 3

namespace {

Interval a_t_from_log(const Interval& t, const Interval& ln_b1) {
    const Interval ln2 = BoundConstants::compute(t.precision()).ln2;
    return ln_b1 / ln2 + 2 * ln(ln_b1) / ln2 + t;
}

}  // namespace

Interval a_t_bound(const Interval& t, const LogArg& b) {
    if (b < LogArg::exact(BigNat(35))) throw DomainError("a_t_bound: B must be >= 35, got " + b.to_string());
    return a_t_from_log(t, b.ln_plus_one(t.precision()));
}

Interval a_t_bound(const Interval& t, const Interval& b) {
    require_at_least(b, 35, "a_t_bound");
    return a_t_from_log(t, ln(b + 1));
}

std::int64_t k_max_bound(const Interval& u, const LogArg& b) {
    if (b < LogArg::exact(BigNat(35))) throw DomainError("k_max_bound: B must be >= 35, got " + b.to_string());
    const Precision prec = u.precision();
    const Interval ln2 = BoundConstants::compute(prec).ln2;
    return (ln(b.ln_plus_one(prec)) / ln2 + u).floor_hi();
}

Interval eq3_lower_c(std::int64_t a, std::int64_t b, Precision prec) {
    if (a < 1 || b < 1) throw InvalidArgument("eq3_lower_c: A and B must be >= 1");
    const Interval ln2 = BoundConstants::compute(prec).ln2;
    return Interval::from_int(a + b + 1, prec) - ln(Interval::from_int(a + 1, prec)) / ln2 -
           ln(Interval::from_int(b + 1, prec)) / ln2;
}

Interval r_value(std::int64_t a, std::int64_t b, Precision prec) {
    if (a < 1 || a > b) throw InvalidArgument("r_value: requires 1 <= A <= B");
    const Interval ln2 = BoundConstants::compute(prec).ln2;
    const Interval a1 = Interval::from_int(a + 1, prec);
    const Interval b1 = Interval::from_int(b + 1, prec);
    const Interval arg = a1 + b1 - ln(a1) / ln2 - ln(b1) / ln2;
    if (!arg.positive()) throw DomainError("r_value: composite logGamma argument touches <= 0");
    return lgamma_bracket(arg) - lgamma_bracket(a1) - lgamma_bracket(b1);
}

// ------------------------------------------------------------ bisection

double min_t_for_positive_c(const LogArg& x, double tol, Precision prec) {
    if (!(tol > 0)) throw InvalidArgument("min_t_for_positive_c: tol must be > 0");
    if (x < LogArg::decimal_power(6)) throw DomainError("min_t_for_positive_c: x must be >= 1e6");

    const LogTerms terms = LogTerms::of(x, prec);
    auto certified = [&](double t) { return c_func(Interval::from_double(t, prec), terms).positive(); };

    double lo = BoundConstants::compute(prec).t_thresh.lo_down();
    double hi = 4.0;
    if (!certified(hi)) throw NotFound("c_func(4, " + x.to_string() + ") is not certified positive");
    while (hi - lo > tol) {
        const double mid = lo + (hi - lo) / 2;
        if (certified(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace suranyi
