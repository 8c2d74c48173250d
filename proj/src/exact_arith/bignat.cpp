#include "suranyi/bignat.hpp"

#include <algorithm>
#include <climits>

#include "suranyi/errors.hpp"

namespace suranyi {

namespace {

mpz_class from_u64(std::uint64_t v) {
    mpz_class out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return out;
}

}  // namespace

BigNat::BigNat(std::uint64_t v) : value_(from_u64(v)) {}

BigNat::BigNat(const mpz_class& v) : value_(v) {
    if (sgn(value_) < 0) throw InvalidArgument("BigNat: negative value");
}

BigNat::BigNat(mpz_class&& v) : value_(std::move(v)) {
    if (sgn(value_) < 0) throw InvalidArgument("BigNat: negative value");
}

BigNat BigNat::from_string(std::string_view digits) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                       [](char c) { return c >= '0' && c <= '9'; })) {
        throw InvalidArgument("BigNat: not a decimal integer: '" + std::string(digits) + "'");
    }
    return BigNat(mpz_class(std::string(digits), 10));
}

BigNat BigNat::pow(const BigNat& base, unsigned long exponent) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.value_.get_mpz_t(), exponent);
    return BigNat(std::move(out));
}

BigNat BigNat::pow10(unsigned long exponent) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), 10, exponent);
    return BigNat(std::move(out));
}

bool BigNat::fits_u64() const noexcept { return mpz_sizeinbase(value_.get_mpz_t(), 2) <= 64; }

std::uint64_t BigNat::to_u64() const {
    if (!fits_u64()) throw InvalidArgument("BigNat: value exceeds 64 bits");
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, value_.get_mpz_t());
    return out;
}

std::size_t BigNat::bit_length() const noexcept {
    return is_zero() ? 0 : mpz_sizeinbase(value_.get_mpz_t(), 2);
}

std::size_t BigNat::decimal_digits() const {
    // mpz_sizeinbase may overshoot by one for base 10.
    std::size_t est = mpz_sizeinbase(value_.get_mpz_t(), 10);
    if (est <= 1) return 1;
    mpz_class threshold;
    mpz_ui_pow_ui(threshold.get_mpz_t(), 10, est - 1);
    return value_ < threshold ? est - 1 : est;
}

std::string BigNat::to_string() const { return value_.get_str(10); }

BigNat& BigNat::operator+=(const BigNat& rhs) {
    value_ += rhs.value_;
    return *this;
}

BigNat& BigNat::operator-=(const BigNat& rhs) {
    if (value_ < rhs.value_) throw InvalidArgument("BigNat: subtraction underflow");
    value_ -= rhs.value_;
    return *this;
}

BigNat& BigNat::operator*=(const BigNat& rhs) {
    value_ *= rhs.value_;
    return *this;
}

BigNat& BigNat::operator*=(std::uint64_t rhs) {
    if (rhs <= ULONG_MAX) {
        mpz_mul_ui(value_.get_mpz_t(), value_.get_mpz_t(), static_cast<unsigned long>(rhs));
    } else {
        value_ *= from_u64(rhs);
    }
    return *this;
}

BigNat::DivMod BigNat::divmod(const BigNat& divisor) const {
    if (divisor.is_zero()) throw DomainError("BigNat: division by zero");
    mpz_class q;
    mpz_class r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), value_.get_mpz_t(), divisor.value_.get_mpz_t());
    return {BigNat(std::move(q)), BigNat(std::move(r))};
}

std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
    int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace suranyi
