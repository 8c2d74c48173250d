#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace suranyi {

// Exact arbitrary-precision nonnegative integer.
//
// Thin value type over mpz_class that enforces non-negativity: subtraction
// that would go below zero throws InvalidArgument instead of wrapping.
class BigNat {
public:
    BigNat() = default;
    BigNat(std::uint64_t v);  // NOLINT(google-explicit-constructor)
    explicit BigNat(const mpz_class& v);
    explicit BigNat(mpz_class&& v);

    // Parses a decimal string of digits. Throws InvalidArgument otherwise.
    static BigNat from_string(std::string_view digits);
    static BigNat pow(const BigNat& base, unsigned long exponent);
    static BigNat pow10(unsigned long exponent);

    [[nodiscard]] const mpz_class& mpz() const noexcept { return value_; }

    [[nodiscard]] bool is_zero() const noexcept { return value_ == 0; }
    [[nodiscard]] bool fits_u64() const noexcept;
    // Precondition: fits_u64().
    [[nodiscard]] std::uint64_t to_u64() const;
    [[nodiscard]] std::size_t bit_length() const noexcept;
    // Exact number of decimal digits (1 for zero).
    [[nodiscard]] std::size_t decimal_digits() const;
    [[nodiscard]] std::string to_string() const;

    BigNat& operator+=(const BigNat& rhs);
    BigNat& operator-=(const BigNat& rhs);
    BigNat& operator*=(const BigNat& rhs);
    BigNat& operator*=(std::uint64_t rhs);

    friend BigNat operator+(BigNat lhs, const BigNat& rhs) { return lhs += rhs; }
    friend BigNat operator-(BigNat lhs, const BigNat& rhs) { return lhs -= rhs; }
    friend BigNat operator*(BigNat lhs, const BigNat& rhs) { return lhs *= rhs; }
    friend BigNat operator*(BigNat lhs, std::uint64_t rhs) { return lhs *= rhs; }

    struct DivMod;
    // Throws DomainError on division by zero.
    [[nodiscard]] DivMod divmod(const BigNat& divisor) const;

    friend bool operator==(const BigNat& a, const BigNat& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b);

private:
    mpz_class value_;
};

struct BigNat::DivMod {
    BigNat quotient;
    BigNat remainder;
};

}  // namespace suranyi
