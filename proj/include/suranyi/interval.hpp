#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <mpfr.h>

#include "suranyi/bignat.hpp"

namespace suranyi {

// Significand precision in bits for interval endpoints.
struct Precision {
    mpfr_prec_t bits = 256;

    friend bool operator==(Precision, Precision) = default;
    [[nodiscard]] Precision doubled() const { return Precision{bits * 2}; }
};

inline constexpr Precision kDefaultPrecision{256};
inline constexpr Precision kMaxPrecision{4096};

// Owning RAII handle for one mpfr_t.
class Mpfr {
public:
    explicit Mpfr(Precision prec);
    Mpfr(const Mpfr& other);
    Mpfr(Mpfr&& other) noexcept;
    Mpfr& operator=(const Mpfr& other);
    Mpfr& operator=(Mpfr&& other) noexcept;
    ~Mpfr();

    mpfr_ptr get() noexcept { return value_; }
    [[nodiscard]] mpfr_srcptr get() const noexcept { return value_; }
    [[nodiscard]] Precision precision() const noexcept { return Precision{mpfr_get_prec(value_)}; }

private:
    mpfr_t value_;
};

// Closed interval [lo, hi] with outward-rounded endpoints. Every operation
// returns an enclosure of the exact image of its operands. Binary operations
// run at the larger of the two operand precisions.
class Interval {
public:
    explicit Interval(Precision prec = kDefaultPrecision);  // [0, 0]

    static Interval from_double(double v, Precision prec);  // exact
    static Interval from_int(std::int64_t v, Precision prec);
    static Interval from_bignat(const BigNat& v, Precision prec);
    // Decimal literal such as "2.1221", "-1.3479" or "1e-6", rounded outward.
    static Interval from_decimal(std::string_view literal, Precision prec);
    // [lo, hi] from two endpoints already rounded by the caller.
    static Interval from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, Precision prec);

    [[nodiscard]] Precision precision() const noexcept { return lo_.precision(); }
    [[nodiscard]] mpfr_srcptr lo() const noexcept { return lo_.get(); }
    [[nodiscard]] mpfr_srcptr hi() const noexcept { return hi_.get(); }
    // Endpoints as doubles, rounded further outward.
    [[nodiscard]] double lo_down() const;
    [[nodiscard]] double hi_up() const;
    [[nodiscard]] double mid() const;
    [[nodiscard]] double width_up() const;

    [[nodiscard]] bool contains(mpfr_srcptr v) const;
    [[nodiscard]] bool contains(double v) const;
    [[nodiscard]] bool contains(const Interval& inner) const;
    [[nodiscard]] bool contains_zero() const;
    [[nodiscard]] bool positive() const;  // lo > 0
    [[nodiscard]] bool is_point() const;

    // floor(hi) and ceil(hi) as integers.
    [[nodiscard]] std::int64_t floor_hi() const;
    [[nodiscard]] std::int64_t ceil_hi() const;

    [[nodiscard]] std::string to_string(int digits = 20) const;

    Interval operator-() const;
    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    // Throws DomainError when b contains zero.
    friend Interval operator/(const Interval& a, const Interval& b);

    friend Interval operator+(const Interval& a, std::int64_t b);
    friend Interval operator-(const Interval& a, std::int64_t b);
    friend Interval operator*(std::int64_t a, const Interval& b);
    friend Interval operator/(const Interval& a, std::int64_t b);
    friend Interval operator/(std::int64_t a, const Interval& b);

private:
    Interval(Mpfr lo, Mpfr hi);

    Mpfr lo_;
    Mpfr hi_;
};

// Throws DomainError when x.lo <= 0.
Interval ln(const Interval& x);
Interval exp(const Interval& x);
Interval sqr(const Interval& x);
Interval pow(const Interval& x, unsigned n);
// Convex hull of two intervals.
Interval hull(const Interval& a, const Interval& b);

}  // namespace suranyi
