#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>

#include "suranyi/errors.hpp"
#include "suranyi/interval.hpp"
#include "suranyi/log_arg.hpp"

namespace suranyi {

// Certified enclosures of the constants the bounds are built from.
struct BoundConstants {
    Interval ln2;
    Interval lnln2;   // ln(ln 2) < 0
    Interval pi;
    Interval ln_2pi;
    Interval ln10;
    // -1 - (1 + 2 lnln2)/ln2: infimum of admissible shifts t for A_t
    Interval t_thresh;
    // -(1 + lnln2)/ln2: limit of the additive constant in C - B <= log2 ln(B+1) + u
    Interval u_thresh;
    // 1 + (2 + 3 lnln2)/ln2: supremum of admissible v for the B - A bound
    Interval v_thresh;

    static BoundConstants compute(Precision prec);
};

// ln, lnln and 1/x for an argument x, computed once and shared by the
// phi-functions. Throws DomainError unless x >= 35.
struct LogTerms {
    Interval inv_x;
    Interval ln_x;
    Interval lnln_x;

    static LogTerms of(const LogArg& x, Precision prec);
    static LogTerms of(const Interval& x);
};

// Encloses logGamma over x. For x >= 10 uses
//   0 <= logGamma(x) - x(ln x - 1) - ln(2 pi / x)/2 <= 1/(12x)
// evaluated at the endpoints (both sides are increasing there); smaller
// arguments are lifted past 10 with logGamma(x) = logGamma(x+n) - sum ln(x+i).
// Throws DomainError when x.lo <= 0.
Interval lgamma_bracket(const Interval& x);

// Encloses Psi over x with ln x - 1/(2x) - 1/(12x^2) <= Psi(x) <= ln x - 1/(2x).
// Throws DomainError when x.lo < 1.
Interval digamma_bracket(const Interval& x);

// Lower-order correction terms of the key positivity margin.
// With q = (2 lnln x + (t+1) ln2) / (ln2 ln x):
//   phi1 = -q - (1/ln x)(1/(2x) + 1/(12x^2))(lnln x/ln2 + t + 1 + lnln2/ln2 - q)
//   phi2 = q (lnln x - lnln2 + q ln2)
Interval phi1(const Interval& t, const LogTerms& x);
Interval phi1(const Interval& t, const LogArg& x);
Interval phi1(const Interval& t, const Interval& x);
Interval phi2(const Interval& t, const LogTerms& x);
Interval phi2(const Interval& t, const LogArg& x);
Interval phi2(const Interval& t, const Interval& x);

// C(t, x) = t + 1 + (1 + 2 lnln2)/ln2 + phi1(t, x) - phi2(t, x).
// C(t, B+1) > 0 implies every solution satisfies A <= A_t.
Interval c_func(const Interval& t, const LogTerms& x);
Interval c_func(const Interval& t, const LogArg& x);
Interval c_func(const Interval& t, const Interval& x);

// u_thresh + phi2(t, x): the additive constant u in C - B <= log2 ln(B+1) + u.
Interval u_majorant(const Interval& t, const LogArg& x);

// A_t = ln(B+1)/ln2 + 2 ln ln(B+1)/ln2 + t. Requires B >= 35.
Interval a_t_bound(const Interval& t, const LogArg& b);
Interval a_t_bound(const Interval& t, const Interval& b);

// floor of the upper endpoint of lnln(B+1)/ln2 + u. Requires B >= 35.
std::int64_t k_max_bound(const Interval& u, const LogArg& b);

// Right-hand side of C >= A + B + 1 - log2(A+1) - log2(B+1).
Interval eq3_lower_c(std::int64_t a, std::int64_t b, Precision prec);

// R(A, B) = logGamma(A + B + 2 - log2(A+1) - log2(B+1)) - logGamma(A+1) - logGamma(B+1).
// Nonpositive at every solution and increasing in A. Requires 1 <= A <= B.
Interval r_value(std::int64_t a, std::int64_t b, Precision prec);

// Least t (to within tol) in [t_thresh, 4] with c_func(t, x).lo > 0, found by
// bisection. The returned t itself satisfies c_func(t, x).lo > 0 when
// promoted exactly to an interval. Throws NotFound if c_func(4, x).lo <= 0.
double min_t_for_positive_c(const LogArg& x, double tol, Precision prec);

// Runs `attempt` at start, 2*start, ... up to cap until it yields a value.
// Throws CertificationFailure naming `what` when every precision fails.
template <typename F>
auto with_precision_escalation(Precision start, Precision cap, const std::string& what, F&& attempt)
    -> std::remove_cvref_t<decltype(*attempt(start))> {
    for (Precision p = start; p.bits <= cap.bits; p = p.doubled()) {
        try {
            if (auto result = attempt(p)) return *result;
        } catch (const NotFound&) {
            // insufficient precision for the bracket; retry higher
        }
    }
    throw CertificationFailure("could not certify " + what + " up to " + std::to_string(cap.bits) + " bits");
}

}  // namespace suranyi
