#include "suranyi/interval.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "suranyi/errors.hpp"

namespace suranyi {

// -------------------------------------------------------------------- Mpfr

Mpfr::Mpfr(Precision prec) {
    mpfr_init2(value_, prec.bits);
    mpfr_set_zero(value_, 1);
}

Mpfr::Mpfr(const Mpfr& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);  // same precision: exact
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_swap(value_, other.value_);
}

Mpfr& Mpfr::operator=(const Mpfr& other) {
    if (this != &other) {
        mpfr_set_prec(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

Mpfr::~Mpfr() { mpfr_clear(value_); }

// ---------------------------------------------------------------- Interval

namespace {

Precision max_prec(const Interval& a, const Interval& b) {
    return Precision{std::max(a.precision().bits, b.precision().bits)};
}

// min/max of four candidates; used by mul/div where every endpoint pairing
// is computed once rounded down and once rounded up.
template <typename Op>
Interval corner_hull(const Interval& a, const Interval& b, Op op) {
    const Precision prec = max_prec(a, b);
    mpfr_srcptr as[2] = {a.lo(), a.hi()};
    mpfr_srcptr bs[2] = {b.lo(), b.hi()};
    Mpfr lo(prec);
    Mpfr hi(prec);
    Mpfr tmp(prec);
    bool first = true;
    for (auto x : as) {
        for (auto y : bs) {
            op(tmp.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(tmp.get(), lo.get())) mpfr_set(lo.get(), tmp.get(), MPFR_RNDD);
            op(tmp.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(tmp.get(), hi.get())) mpfr_set(hi.get(), tmp.get(), MPFR_RNDU);
            first = false;
        }
    }
    return Interval::from_endpoints(lo.get(), hi.get(), prec);
}

}  // namespace

Interval::Interval(Precision prec) : lo_(prec), hi_(prec) {}

Interval::Interval(Mpfr lo, Mpfr hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (mpfr_nan_p(lo_.get()) || mpfr_nan_p(hi_.get())) throw DomainError("interval: NaN endpoint");
    if (mpfr_greater_p(lo_.get(), hi_.get())) throw ConsistencyError("interval: lo > hi");
}

Interval Interval::from_double(double v, Precision prec) {
    if (std::isnan(v)) throw DomainError("interval: NaN input");
    Mpfr lo(prec);
    Mpfr hi(prec);
    mpfr_set_d(lo.get(), v, MPFR_RNDD);
    mpfr_set_d(hi.get(), v, MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
}

Interval Interval::from_int(std::int64_t v, Precision prec) {
    Mpfr lo(prec);
    Mpfr hi(prec);
    mpfr_set_sj(lo.get(), v, MPFR_RNDD);
    mpfr_set_sj(hi.get(), v, MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
}

Interval Interval::from_bignat(const BigNat& v, Precision prec) {
    Mpfr lo(prec);
    Mpfr hi(prec);
    mpfr_set_z(lo.get(), v.mpz().get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi.get(), v.mpz().get_mpz_t(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
}

Interval Interval::from_decimal(std::string_view literal, Precision prec) {
    const std::string s(literal);
    Mpfr lo(prec);
    Mpfr hi(prec);
    if (s.empty() || mpfr_set_str(lo.get(), s.c_str(), 10, MPFR_RNDD) != 0 ||
        mpfr_set_str(hi.get(), s.c_str(), 10, MPFR_RNDU) != 0) {
        throw InvalidArgument("interval: not a decimal number: '" + s + "'");
    }
    return {std::move(lo), std::move(hi)};
}

Interval Interval::from_endpoints(mpfr_srcptr lo_in, mpfr_srcptr hi_in, Precision prec) {
    Mpfr lo(prec);
    Mpfr hi(prec);
    mpfr_set(lo.get(), lo_in, MPFR_RNDD);
    mpfr_set(hi.get(), hi_in, MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
}

double Interval::lo_down() const { return mpfr_get_d(lo(), MPFR_RNDD); }
double Interval::hi_up() const { return mpfr_get_d(hi(), MPFR_RNDU); }

double Interval::mid() const {
    Mpfr m(precision());
    mpfr_add(m.get(), lo(), hi(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return mpfr_get_d(m.get(), MPFR_RNDN);
}

double Interval::width_up() const {
    Mpfr w(precision());
    mpfr_sub(w.get(), hi(), lo(), MPFR_RNDU);
    return mpfr_get_d(w.get(), MPFR_RNDU);
}

bool Interval::contains(mpfr_srcptr v) const {
    return mpfr_lessequal_p(lo(), v) && mpfr_lessequal_p(v, hi());
}

bool Interval::contains(double v) const {
    return mpfr_cmp_d(lo(), v) <= 0 && mpfr_cmp_d(hi(), v) >= 0;
}

bool Interval::contains(const Interval& inner) const {
    return mpfr_lessequal_p(lo(), inner.lo()) && mpfr_lessequal_p(inner.hi(), hi());
}

bool Interval::contains_zero() const { return mpfr_sgn(lo()) <= 0 && mpfr_sgn(hi()) >= 0; }
bool Interval::positive() const { return mpfr_sgn(lo()) > 0; }
bool Interval::is_point() const { return mpfr_equal_p(lo(), hi()); }

std::int64_t Interval::floor_hi() const {
    Mpfr f(precision());
    mpfr_floor(f.get(), hi());
    return static_cast<std::int64_t>(mpfr_get_sj(f.get(), MPFR_RNDD));
}

std::int64_t Interval::ceil_hi() const {
    Mpfr f(precision());
    mpfr_ceil(f.get(), hi());
    return static_cast<std::int64_t>(mpfr_get_sj(f.get(), MPFR_RNDU));
}

std::string Interval::to_string(int digits) const {
    auto fmt = [digits](mpfr_srcptr v, mpfr_rnd_t rnd) {
        char* raw = nullptr;
        const std::string spec = "%." + std::to_string(digits) + "R*g";
        mpfr_asprintf(&raw, spec.c_str(), rnd, v);
        std::string out(raw);
        mpfr_free_str(raw);
        return out;
    };
    return "[" + fmt(lo(), MPFR_RNDD) + ", " + fmt(hi(), MPFR_RNDU) + "]";
}

Interval Interval::operator-() const {
    Mpfr lo(precision());
    Mpfr hi(precision());
    mpfr_neg(lo.get(), this->hi(), MPFR_RNDD);
    mpfr_neg(hi.get(), this->lo(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
}

Interval operator+(const Interval& a, const Interval& b) {
    const Precision prec = max_prec(a, b);
    Mpfr lo(prec);
    Mpfr hi(prec);
    mpfr_add(lo.get(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_add(hi.get(), a.hi(), b.hi(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
}

Interval operator-(const Interval& a, const Interval& b) {
    const Precision prec = max_prec(a, b);
    Mpfr lo(prec);
    Mpfr hi(prec);
    mpfr_sub(lo.get(), a.lo(), b.hi(), MPFR_RNDD);
    mpfr_sub(hi.get(), a.hi(), b.lo(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
}

Interval operator*(const Interval& a, const Interval& b) { return corner_hull(a, b, mpfr_mul); }

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw DomainError("interval: division by an interval containing 0");
    return corner_hull(a, b, mpfr_div);
}

Interval operator+(const Interval& a, std::int64_t b) { return a + Interval::from_int(b, a.precision()); }
Interval operator-(const Interval& a, std::int64_t b) { return a - Interval::from_int(b, a.precision()); }
Interval operator*(std::int64_t a, const Interval& b) { return Interval::from_int(a, b.precision()) * b; }
Interval operator/(const Interval& a, std::int64_t b) { return a / Interval::from_int(b, a.precision()); }
Interval operator/(std::int64_t a, const Interval& b) { return Interval::from_int(a, b.precision()) / b; }

Interval ln(const Interval& x) {
    if (!x.positive()) throw DomainError("interval ln: argument " + x.to_string(8) + " touches <= 0");
    Mpfr lo(x.precision());
    Mpfr hi(x.precision());
    mpfr_log(lo.get(), x.lo(), MPFR_RNDD);
    mpfr_log(hi.get(), x.hi(), MPFR_RNDU);
    return Interval::from_endpoints(lo.get(), hi.get(), x.precision());
}

Interval exp(const Interval& x) {
    Mpfr lo(x.precision());
    Mpfr hi(x.precision());
    mpfr_exp(lo.get(), x.lo(), MPFR_RNDD);
    mpfr_exp(hi.get(), x.hi(), MPFR_RNDU);
    return Interval::from_endpoints(lo.get(), hi.get(), x.precision());
}

Interval pow(const Interval& x, unsigned n) {
    const Precision prec = x.precision();
    if (n == 0) return Interval::from_int(1, prec);
    Mpfr lo(prec);
    Mpfr hi(prec);
    const bool even = n % 2 == 0;
    if (!even || mpfr_sgn(x.lo()) >= 0) {
        // Monotone increasing on the whole interval.
        mpfr_pow_ui(lo.get(), x.lo(), n, MPFR_RNDD);
        mpfr_pow_ui(hi.get(), x.hi(), n, MPFR_RNDU);
    } else if (mpfr_sgn(x.hi()) <= 0) {
        mpfr_pow_ui(lo.get(), x.hi(), n, MPFR_RNDD);
        mpfr_pow_ui(hi.get(), x.lo(), n, MPFR_RNDU);
    } else {
        Mpfr a(prec);
        mpfr_pow_ui(a.get(), x.lo(), n, MPFR_RNDU);
        mpfr_pow_ui(hi.get(), x.hi(), n, MPFR_RNDU);
        if (mpfr_greater_p(a.get(), hi.get())) mpfr_set(hi.get(), a.get(), MPFR_RNDU);
        mpfr_set_zero(lo.get(), 1);
    }
    return Interval::from_endpoints(lo.get(), hi.get(), prec);
}

Interval sqr(const Interval& x) { return pow(x, 2); }

Interval hull(const Interval& a, const Interval& b) {
    mpfr_srcptr lo = mpfr_lessequal_p(a.lo(), b.lo()) ? a.lo() : b.lo();
    mpfr_srcptr hi = mpfr_greaterequal_p(a.hi(), b.hi()) ? a.hi() : b.hi();
    return Interval::from_endpoints(lo, hi, max_prec(a, b));
}

}  // namespace suranyi
