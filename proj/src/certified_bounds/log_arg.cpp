#include "suranyi/log_arg.hpp"

#include <charconv>

#include "suranyi/errors.hpp"

namespace suranyi {

namespace {

constexpr std::uint64_t kMaterializeLimit = 1'000'000;

Interval ln10(Precision prec) {
    Mpfr lo(prec);
    Mpfr hi(prec);
    mpfr_log_ui(lo.get(), 10, MPFR_RNDD);
    mpfr_log_ui(hi.get(), 10, MPFR_RNDU);
    return Interval::from_endpoints(lo.get(), hi.get(), prec);
}

std::uint64_t parse_u64(std::string_view text, std::string_view whole) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidArgument("not a positive integer or 1eD power: '" + std::string(whole) + "'");
    }
    return out;
}

}  // namespace

LogArg LogArg::exact(BigNat value) {
    if (value.is_zero()) throw InvalidArgument("LogArg: argument must be positive");
    return LogArg(std::move(value));
}

LogArg LogArg::decimal_power(std::uint64_t exponent) { return LogArg(DecimalPower{exponent}); }

LogArg LogArg::parse(std::string_view text) {
    const auto e = text.find_first_of("eE");
    if (e == std::string_view::npos) {
        for (char c : text) {
            if (c < '0' || c > '9') {
                throw InvalidArgument("not a positive integer or 1eD power: '" + std::string(text) + "'");
            }
        }
        if (text.empty()) throw InvalidArgument("empty LogArg");
        return exact(BigNat::from_string(text));
    }
    const std::uint64_t mantissa = parse_u64(text.substr(0, e), text);
    const std::uint64_t exponent = parse_u64(text.substr(e + 1), text);
    if (mantissa == 1) return decimal_power(exponent);
    if (exponent > kMaterializeLimit) {
        throw InvalidArgument("LogArg: exponent too large for a non-unit mantissa: '" + std::string(text) + "'");
    }
    return exact(BigNat(mantissa) * BigNat::pow10(exponent));
}

bool LogArg::is_decimal_power() const noexcept { return std::holds_alternative<DecimalPower>(repr_); }

std::uint64_t LogArg::exponent() const {
    if (!is_decimal_power()) throw InvalidArgument("LogArg: not a decimal power");
    return std::get<DecimalPower>(repr_).exponent;
}

BigNat LogArg::to_bignat() const {
    if (const auto* v = std::get_if<BigNat>(&repr_)) return *v;
    const auto d = std::get<DecimalPower>(repr_).exponent;
    if (d > kMaterializeLimit) throw ResourceError("LogArg: 10^" + std::to_string(d) + " too large to materialize");
    return BigNat::pow10(d);
}

Interval LogArg::enclose(Precision prec) const {
    if (const auto* v = std::get_if<BigNat>(&repr_)) return Interval::from_bignat(*v, prec);
    const auto d = std::get<DecimalPower>(repr_).exponent;
    Mpfr lo(prec);
    Mpfr hi(prec);
    mpfr_ui_pow_ui(lo.get(), 10, d, MPFR_RNDD);
    mpfr_ui_pow_ui(hi.get(), 10, d, MPFR_RNDU);
    if (mpfr_inf_p(hi.get())) throw DomainError("LogArg: 10^" + std::to_string(d) + " overflows the exponent range");
    return Interval::from_endpoints(lo.get(), hi.get(), prec);
}

Interval LogArg::ln(Precision prec) const {
    if (const auto* v = std::get_if<BigNat>(&repr_)) return suranyi::ln(Interval::from_bignat(*v, prec));
    const auto d = std::get<DecimalPower>(repr_).exponent;
    return static_cast<std::int64_t>(d) * ln10(prec);
}

Interval LogArg::ln_plus_one(Precision prec) const {
    if (const auto* v = std::get_if<BigNat>(&repr_)) {
        return suranyi::ln(Interval::from_bignat(*v + BigNat(1), prec));
    }
    const auto d = std::get<DecimalPower>(repr_).exponent;
    const Interval base = ln(prec);
    // ln(10^d + 1) - d ln 10 = ln(1 + 10^-d) < 10^-d <= 10^-(d-1).
    Mpfr slack(prec);
    mpfr_set_ui(slack.get(), 10, MPFR_RNDU);
    Mpfr denom(prec);
    mpfr_ui_pow_ui(denom.get(), 10, d, MPFR_RNDD);
    mpfr_div(slack.get(), slack.get(), denom.get(), MPFR_RNDU);
    Mpfr hi(prec);
    mpfr_add(hi.get(), base.hi(), slack.get(), MPFR_RNDU);
    return Interval::from_endpoints(base.lo(), hi.get(), prec);
}

Interval LogArg::reciprocal(Precision prec) const { return 1 / enclose(prec); }

std::string LogArg::to_string() const {
    if (const auto* v = std::get_if<BigNat>(&repr_)) return v->to_string();
    return "1e" + std::to_string(std::get<DecimalPower>(repr_).exponent);
}

std::strong_ordering operator<=>(const LogArg& a, const LogArg& b) {
    const auto* ad = std::get_if<LogArg::DecimalPower>(&a.repr_);
    const auto* bd = std::get_if<LogArg::DecimalPower>(&b.repr_);
    if (ad && bd) return ad->exponent <=> bd->exponent;
    if (!ad && !bd) return std::get<BigNat>(a.repr_) <=> std::get<BigNat>(b.repr_);

    // Mixed: an integer with D digits lies in [10^(D-1), 10^D).
    const BigNat& x = ad ? std::get<BigNat>(b.repr_) : std::get<BigNat>(a.repr_);
    const std::uint64_t d = ad ? ad->exponent : bd->exponent;
    const std::uint64_t digits = x.decimal_digits();
    std::strong_ordering x_vs_pow = std::strong_ordering::equal;
    if (digits <= d) {
        x_vs_pow = std::strong_ordering::less;
    } else if (digits > d + 1) {
        x_vs_pow = std::strong_ordering::greater;
    } else {
        x_vs_pow = x <=> BigNat::pow10(d);
    }
    if (ad) return 0 <=> x_vs_pow;  // a is the power, flip the sense
    return x_vs_pow;
}

}  // namespace suranyi
