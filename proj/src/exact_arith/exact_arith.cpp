#include "suranyi/exact_arith.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <random>
#include <string>

#include "suranyi/errors.hpp"

namespace suranyi {

// ---------------------------------------------------------------- factorials

std::size_t factorial_digits_upper(std::uint64_t n) {
    if (n < 2) return 1;
    // log10(n!) through lgamma; the relative margin absorbs double rounding.
    const double log10_fact = std::lgamma(static_cast<double>(n) + 1.0) / std::log(10.0);
    return static_cast<std::size_t>(std::floor(log10_fact * (1.0 + 1e-12) + 1e-9)) + 1;
}

namespace {

void check_digit_cap(std::uint64_t n, std::size_t digit_cap) {
    if (factorial_digits_upper(n) > digit_cap) {
        throw ResourceError(std::to_string(n) + "! exceeds the digit cap of " +
                            std::to_string(digit_cap) + " decimal digits");
    }
}

}  // namespace

BigNat factorial(std::uint64_t n, std::size_t digit_cap) {
    check_digit_cap(n, digit_cap);
    mpz_class out;
    mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
    return BigNat(std::move(out));
}

FactorialAccumulator::FactorialAccumulator(std::uint64_t n, std::size_t digit_cap)
    : n_(n), digit_cap_(digit_cap), value_(factorial(n, digit_cap)) {}

void FactorialAccumulator::advance() {
    check_digit_cap(n_ + 1, digit_cap_);
    ++n_;
    value_ *= n_;
}

// ------------------------------------------------------- digits, valuations

std::uint64_t digit_sum(const BigNat& n, std::uint64_t base) {
    if (base < 2) throw InvalidArgument("digit_sum: base must be >= 2, got " + std::to_string(base));
    if (n.fits_u64()) {
        std::uint64_t v = n.to_u64();
        std::uint64_t sum = 0;
        while (v != 0) {
            sum += v % base;
            v /= base;
        }
        return sum;
    }
    if (base == 2) return mpz_popcount(n.mpz().get_mpz_t());

    // Peel off the largest power of the base that fits in a limb, then sum
    // the digits of each remainder chunk.
    std::uint64_t chunk = base;
    unsigned chunk_digits = 1;
    while (chunk <= (~0UL) / base) {
        chunk *= base;
        ++chunk_digits;
    }
    mpz_class rest = n.mpz();
    std::uint64_t sum = 0;
    while (rest != 0) {
        std::uint64_t rem = mpz_tdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), chunk);
        for (unsigned i = 0; i < chunk_digits && rem != 0; ++i) {
            sum += rem % base;
            rem /= base;
        }
    }
    return sum;
}

BigNat legendre_valuation(const BigNat& n, std::uint64_t p) {
    if (p < 2) throw InvalidArgument("legendre_valuation: p must be >= 2");
    const BigNat s = digit_sum(n, p);
    mpz_class numer = n.mpz() - s.mpz();
    mpz_class q;
    mpz_class r;
    mpz_class denom(std::to_string(p - 1), 10);
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), numer.get_mpz_t(), denom.get_mpz_t());
    if (r != 0) {
        throw ConsistencyError("legendre_valuation: p-1 does not divide n - s_p(n) for n=" +
                               n.to_string() + ", p=" + std::to_string(p));
    }
    return BigNat(std::move(q));
}

BigNat legendre_valuation_oracle(const BigNat& n, std::uint64_t p) {
    if (p < 2) throw InvalidArgument("legendre_valuation_oracle: p must be >= 2");
    const BigNat base(p);
    BigNat total;
    BigNat q = n.divmod(base).quotient;
    while (!q.is_zero()) {
        total += q;
        q = q.divmod(base).quotient;
    }
    return total;
}

// ------------------------------------------------------------------- roots

namespace {

mpz_class root_floor(const mpz_class& m, unsigned k) {
    mpz_class r;
    mpz_root(r.get_mpz_t(), m.get_mpz_t(), k);
    return r;
}

}  // namespace

BigNat kth_root_floor(const BigNat& m, unsigned k) {
    if (k < 2) throw InvalidArgument("kth_root_floor: k must be >= 2");
    return BigNat(root_floor(m.mpz(), k));
}

// ------------------------------------------------------- consecutive window

BigNat consecutive_product(const BigNat& b, unsigned k) {
    mpz_class out = 1;
    mpz_class term = b.mpz();
    for (unsigned i = 1; i <= k; ++i) {
        ++term;
        out *= term;
    }
    return BigNat(std::move(out));
}

std::optional<BigNat> find_completing_b(const BigNat& m, unsigned k) {
    if (k < 2 || k > 20) throw InvalidArgument("find_completing_b: k must be in [2, 20]");
    if (m < BigNat(2)) throw InvalidArgument("find_completing_b: m must be >= 2");

    const mpz_class r = root_floor(m.mpz(), k);
    mpz_class b = r > k + 1 ? mpz_class(r - (k + 1)) : mpz_class(0);
    const mpz_class last = r + 1;

    // Residues modulo two primes above 2^31 reject almost every candidate
    // without touching the full-size product; survivors are checked exactly.
    constexpr std::array<std::uint64_t, 2> primes{4294967291u, 4294967279u};
    std::array<std::uint64_t, 2> m_mod{}, b_mod{};
    for (std::size_t j = 0; j < primes.size(); ++j) {
        m_mod[j] = mpz_fdiv_ui(m.mpz().get_mpz_t(), primes[j]);
        b_mod[j] = mpz_fdiv_ui(b.get_mpz_t(), primes[j]);
    }
    for (; b <= last; ++b) {
        bool maybe = true;
        for (std::size_t j = 0; j < primes.size(); ++j) {
            std::uint64_t prod = 1;
            for (unsigned i = 1; i <= k; ++i) prod = prod * ((b_mod[j] + i) % primes[j]) % primes[j];
            maybe = maybe && prod == m_mod[j];
            b_mod[j] = (b_mod[j] + 1) % primes[j];
        }
        if (maybe && consecutive_product(BigNat(b), k) == m) return BigNat(b);
    }
    return std::nullopt;
}

// ---------------------------------------------------- window certificates

mpz_class PolynomialCertificate::evaluate(const mpz_class& x) const {
    mpz_class acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

mpz_class window_polynomial_direct(unsigned k, const mpz_class& x) {
    mpz_class product = 1;
    for (unsigned i = 1; i <= k; ++i) product *= 2 * (x + 1 + i);
    mpz_class base = 2 * x + k + 1;
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), k);
    return product - power;
}

namespace {

using Poly = std::vector<mpz_class>;

// (c0 + c1 x) * p
Poly mul_linear(const Poly& p, const mpz_class& c0, const mpz_class& c1) {
    Poly out(p.size() + 1, 0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        out[j] += c0 * p[j];
        out[j + 1] += c1 * p[j];
    }
    return out;
}

}  // namespace

PolynomialCertificate lemma5_window_certificate(unsigned k) {
    if (k < 2 || k > 64) throw InvalidArgument("window certificate: k must be in [2, 64]");

    Poly product{1};
    Poly power{1};
    for (unsigned i = 1; i <= k; ++i) {
        product = mul_linear(product, 2 * (1 + i), 2);  // 2(x+1+i)
        power = mul_linear(power, k + 1, 2);             // 2x + k + 1
    }

    PolynomialCertificate cert;
    cert.k = k;
    cert.coeffs.resize(product.size());
    for (std::size_t j = 0; j < product.size(); ++j) cert.coeffs[j] = product[j] - power[j];
    // Leading terms cancel: both sides are 2^k x^k + ...
    while (cert.coeffs.size() > 1 && cert.coeffs.back() == 0) cert.coeffs.pop_back();

    cert.all_nonneg = true;
    for (const auto& c : cert.coeffs) cert.all_nonneg = cert.all_nonneg && sgn(c) >= 0;
    cert.positive_at_b1 = sgn(cert.coeffs.front()) > 0;
    cert.verified = cert.all_nonneg && cert.positive_at_b1;

    std::mt19937_64 rng(0x5eed0000ULL + k);
    std::uniform_int_distribution<long> dist(-1000000, 1000000);
    for (int trial = 0; trial < 3; ++trial) {
        const mpz_class x = dist(rng);
        if (cert.evaluate(x) != window_polynomial_direct(k, x)) {
            throw ConsistencyError("window certificate: expansion mismatch for k=" +
                                   std::to_string(k) + " at x=" + x.get_str());
        }
    }
    return cert;
}

}  // namespace suranyi
