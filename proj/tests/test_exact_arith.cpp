#include <cmath>
#include <random>

#include <doctest.h>
#include <gmpxx.h>

#include "suranyi/errors.hpp"
#include "suranyi/exact_arith.hpp"

using namespace suranyi;

namespace {

// n! by plain repeated multiplication, independent of mpz_fac_ui.
BigNat repeated_product_factorial(std::uint64_t n) {
    BigNat acc(1);
    for (std::uint64_t i = 2; i <= n; ++i) acc *= i;
    return acc;
}

}  // namespace

TEST_CASE("factorial") {
    CHECK(factorial(0) == BigNat(1));
    CHECK(factorial(6) == BigNat(720));
    CHECK(factorial(10) == repeated_product_factorial(10));
    CHECK(factorial(10) == BigNat(3628800));
    CHECK(factorial(537) == repeated_product_factorial(537));
}

TEST_CASE("factorial digit cap") {
    CHECK(factorial(300, 1000).decimal_digits() == 615);
    CHECK_THROWS_AS(factorial(1000, 1000), ResourceError);
    // 10000! has 35660 digits.
    CHECK(factorial_digits_upper(10000) == 35660);
    CHECK(factorial(10000).decimal_digits() == 35660);
}

TEST_CASE("factorial accumulator tracks n!") {
    FactorialAccumulator acc(0);
    for (std::uint64_t n = 1; n <= 400; ++n) {
        acc.advance();
        REQUIRE(acc.n() == n);
    }
    CHECK(acc.value() == factorial(400));

    FactorialAccumulator seeded(97);
    seeded.advance();
    CHECK(seeded.value() == factorial(98));
}

TEST_CASE("digit_sum") {
    CHECK(digit_sum(BigNat(10), 2) == 2);
    CHECK(digit_sum(BigNat(0), 7) == 0);
    CHECK(digit_sum(BigNat(999), 10) == 27);
    CHECK_THROWS_AS(digit_sum(BigNat(5), 1), InvalidArgument);
    CHECK_THROWS_AS(digit_sum(BigNat(5), 0), InvalidArgument);

    // Multi-limb path against the decimal string.
    const BigNat big = factorial(500);
    std::uint64_t expected = 0;
    for (char c : big.to_string()) expected += static_cast<std::uint64_t>(c - '0');
    CHECK(digit_sum(big, 10) == expected);
    CHECK(digit_sum(big, 2) == mpz_popcount(big.mpz().get_mpz_t()));
    std::uint64_t base7 = 0;
    for (char c : big.mpz().get_str(7)) base7 += static_cast<std::uint64_t>(c - '0');
    CHECK(digit_sum(big, 7) == base7);
}

TEST_CASE("legendre valuation") {
    CHECK(legendre_valuation(BigNat(10), 2) == BigNat(8));
    CHECK(legendre_valuation(BigNat(0), 5) == BigNat(0));
    CHECK(legendre_valuation(BigNat(100), 5) == BigNat(24));

    CHECK(legendre_valuation_oracle(BigNat(10), 2) == BigNat(8));
    CHECK(legendre_valuation_oracle(BigNat(1), 2) == BigNat(0));
    CHECK(legendre_valuation_oracle(BigNat(25), 5) == BigNat(6));
}

TEST_CASE("legendre valuation agrees with its oracle and with n!") {
    for (std::uint64_t p : {2, 3, 5, 7, 11}) {
        for (std::uint64_t n = 0; n <= 3000; ++n) {
            REQUIRE(legendre_valuation(BigNat(n), p) == legendre_valuation_oracle(BigNat(n), p));
        }
    }
    // Direct count on 200!.
    const mpz_class f = factorial(200).mpz();
    for (unsigned long p : {2UL, 3UL, 13UL, 199UL}) {
        mpz_class rest = f;
        std::uint64_t count = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++count;
        }
        CHECK(legendre_valuation(BigNat(200), p) == BigNat(count));
    }
    // Huge argument.
    const BigNat huge = BigNat::pow10(400) + BigNat(12345);
    CHECK(legendre_valuation(huge, 3) == legendre_valuation_oracle(huge, 3));
}

TEST_CASE("kth_root_floor") {
    CHECK(kth_root_floor(BigNat(720), 3) == BigNat(8));
    CHECK(kth_root_floor(BigNat(1), 12) == BigNat(1));
    CHECK(kth_root_floor(BigNat(3628800), 2) == BigNat(1904));
    CHECK(kth_root_floor(BigNat(0), 2) == BigNat(0));
    CHECK(kth_root_floor(BigNat(1000), 3) == BigNat(10));
    CHECK(kth_root_floor(BigNat(999), 3) == BigNat(9));
    CHECK_THROWS_AS(kth_root_floor(BigNat(8), 1), InvalidArgument);
}

// Independent floor root: top-bits recursion, then integer Newton from above.
mpz_class newton_root(const mpz_class& m, unsigned k) {
    if (m < 2) return m;
    const std::size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    const std::size_t root_bits = (bits + k - 1) / k;  // root < 2^root_bits

    mpz_class x;
    if (root_bits <= 32) {
        x = 1;
        x <<= root_bits;
    } else {
        // Root of the top bits, shifted back, overestimates by at most one
        // unit in the shifted position: ((r0+1) 2^s)^k > m.
        const std::size_t s = root_bits / 2;
        mpz_class top = m >> (k * s);
        mpz_class r0 = newton_root(top, k);
        x = (r0 + 1) << s;
    }

    // Integer Newton from above decreases monotonically to the floor root.
    mpz_class power;
    mpz_class y;
    for (;;) {
        mpz_pow_ui(power.get_mpz_t(), x.get_mpz_t(), k - 1);
        mpz_fdiv_q(y.get_mpz_t(), m.get_mpz_t(), power.get_mpz_t());
        y += (k - 1) * x;
        y /= k;
        if (y >= x) break;
        x.swap(y);
    }
    return x;
}


TEST_CASE("kth_root_floor brackets random 512-bit inputs and matches a Newton oracle") {
    std::mt19937_64 rng(20240917);
    gmp_randclass bits(gmp_randinit_default);
    bits.seed(20240917UL);
    for (int trial = 0; trial < 300; ++trial) {
        const BigNat m = BigNat(mpz_class(bits.get_z_bits(512))) + BigNat(1);
        const unsigned k = 2 + static_cast<unsigned>(rng() % 11);
        const BigNat r = kth_root_floor(m, k);
        REQUIRE(BigNat::pow(r, k) <= m);
        REQUIRE(BigNat::pow(r + BigNat(1), k) > m);
        REQUIRE(r.mpz() == newton_root(m.mpz(), k));
    }
}

TEST_CASE("kth_root_floor on perfect powers and neighbours") {
    for (unsigned k = 2; k <= 12; ++k) {
        const BigNat base = factorial(40) + BigNat(k);
        const BigNat m = BigNat::pow(base, k);
        CHECK(kth_root_floor(m, k) == base);
        CHECK(kth_root_floor(m - BigNat(1), k) == base - BigNat(1));
        CHECK(kth_root_floor(m + BigNat(1), k) == base);
    }
}

TEST_CASE("consecutive_product") {
    CHECK(consecutive_product(BigNat(7), 3) == BigNat(720));
    CHECK(consecutive_product(BigNat(0), 4) == BigNat(24));
    CHECK(consecutive_product(BigNat(25), 2) == BigNat(702));
    CHECK(consecutive_product(BigNat(5), 0) == BigNat(1));
}

TEST_CASE("find_completing_b") {
    CHECK(find_completing_b(BigNat(720), 3) == BigNat(7));
    CHECK_FALSE(find_completing_b(BigNat(720), 2).has_value());
    CHECK(find_completing_b(BigNat(24), 4) == BigNat(0));
    CHECK_THROWS_AS(find_completing_b(BigNat(720), 1), InvalidArgument);
    CHECK_THROWS_AS(find_completing_b(BigNat(720), 21), InvalidArgument);
    CHECK_THROWS_AS(find_completing_b(BigNat(1), 3), InvalidArgument);
}

TEST_CASE("find_completing_b inverts consecutive_product") {
    for (unsigned k = 2; k <= 12; ++k) {
        for (std::uint64_t b = 0; b <= 10000; b += (b < 200 ? 1 : 37)) {
            const BigNat m = consecutive_product(BigNat(b), k);
            REQUIRE(find_completing_b(m, k) == BigNat(b));
            REQUIRE_FALSE(find_completing_b(m + BigNat(1), k).has_value());
        }
    }
    // Large B: 200-digit start.
    const BigNat b = BigNat::pow10(200) + BigNat(17);
    CHECK(find_completing_b(consecutive_product(b, 9), 9) == b);
}

TEST_CASE("find_completing_b hits satisfy the full factorial identity") {
    for (std::uint64_t a = 2; a <= 60; ++a) {
        const BigNat fa = factorial(a);
        for (unsigned k = 2; k <= 12; ++k) {
            if (auto b = find_completing_b(fa, k)) {
                const std::uint64_t bv = b->to_u64();
                REQUIRE(fa * factorial(bv) == factorial(bv + k));
            }
        }
    }
}

TEST_CASE("window certificate k=2") {
    const auto cert = lemma5_window_certificate(2);
    REQUIRE(cert.coeffs.size() == 2);
    CHECK(cert.coeffs[0] == 15);
    CHECK(cert.coeffs[1] == 8);
    CHECK(cert.verified);
}

TEST_CASE("window certificates hold for 2 <= k <= 12") {
    for (unsigned k = 2; k <= 12; ++k) {
        const auto cert = lemma5_window_certificate(k);
        CHECK_MESSAGE(cert.verified, "k=" << k);
        for (long x : {0L, 1L, 37L}) {
            CHECK(cert.evaluate(x) == window_polynomial_direct(k, x));
        }
        // Degree k-1: the x^k terms cancel.
        CHECK(cert.coeffs.size() == k);
    }
    CHECK_THROWS_AS(lemma5_window_certificate(1), InvalidArgument);
}

TEST_CASE("window certificate implies the strict inequality at sample B") {
    for (unsigned k = 2; k <= 12; ++k) {
        for (long b = 1; b <= 50; ++b) {
            // 2^k prod(B+i) > (2B + k - 1)^k
            mpz_class lhs = 1;
            for (unsigned i = 1; i <= k; ++i) lhs *= 2 * (b + static_cast<long>(i));
            mpz_class base = 2 * b + static_cast<long>(k) - 1;
            mpz_class rhs;
            mpz_pow_ui(rhs.get_mpz_t(), base.get_mpz_t(), k);
            REQUIRE(lhs > rhs);
        }
    }
}

TEST_CASE("BigNat basics") {
    CHECK(BigNat::from_string("123456789012345678901234567890").to_string() ==
          "123456789012345678901234567890");
    CHECK_THROWS_AS(BigNat::from_string("12a"), InvalidArgument);
    CHECK_THROWS_AS(BigNat(3) - BigNat(4), InvalidArgument);
    CHECK(BigNat(0).decimal_digits() == 1);
    CHECK(BigNat(999).decimal_digits() == 3);
    CHECK(BigNat(1000).decimal_digits() == 4);
    CHECK(BigNat::pow10(50).decimal_digits() == 51);
    CHECK((BigNat::pow10(50) - BigNat(1)).decimal_digits() == 50);
    const auto dm = BigNat(100).divmod(BigNat(7));
    CHECK(dm.quotient == BigNat(14));
    CHECK(dm.remainder == BigNat(2));
    CHECK_THROWS_AS(BigNat(1).divmod(BigNat(0)), DomainError);
    CHECK(BigNat(~0ULL).to_u64() == ~0ULL);
}
