#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "suranyi/bignat.hpp"
#include "suranyi/interval.hpp"

namespace suranyi {

// A positive real argument that may be far too large for floating point:
// either an exact integer or 10^d held symbolically. ln(10^d) is enclosed
// as d * ln(10); the power itself is never expanded for logarithms.
class LogArg {
public:
    struct DecimalPower {
        std::uint64_t exponent;
        friend bool operator==(const DecimalPower&, const DecimalPower&) = default;
    };

    static LogArg exact(BigNat value);
    static LogArg decimal_power(std::uint64_t exponent);

    // Accepts "1e1000" (decimal power), "2e6" (exact 2000000) and plain
    // integers. Throws InvalidArgument on anything else.
    static LogArg parse(std::string_view text);

    [[nodiscard]] bool is_decimal_power() const noexcept;
    // Exponent d of the decimal-power form. Precondition: is_decimal_power().
    [[nodiscard]] std::uint64_t exponent() const;
    // Materializes the integer. Intended for comparisons against moderately
    // sized values; throws ResourceError when 10^d has more than 10^6 digits.
    [[nodiscard]] BigNat to_bignat() const;

    [[nodiscard]] Interval enclose(Precision prec) const;
    [[nodiscard]] Interval ln(Precision prec) const;
    // ln(x + 1). For 10^d uses [d ln 10, d ln 10 + 10^-(d-1)].
    [[nodiscard]] Interval ln_plus_one(Precision prec) const;
    [[nodiscard]] Interval reciprocal(Precision prec) const;

    // "1e1000" for decimal powers, decimal digits otherwise.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const LogArg& a, const LogArg& b) { return (a <=> b) == 0; }
    friend std::strong_ordering operator<=>(const LogArg& a, const LogArg& b);

private:
    explicit LogArg(std::variant<BigNat, DecimalPower> repr) : repr_(std::move(repr)) {}

    std::variant<BigNat, DecimalPower> repr_;
};

}  // namespace suranyi
