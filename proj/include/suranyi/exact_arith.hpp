#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "suranyi/bignat.hpp"

namespace suranyi {

inline constexpr std::size_t kDefaultDigitCap = 1'000'000;

// Returns n! exactly. Throws ResourceError when n! would have more than
// digit_cap decimal digits.
BigNat factorial(std::uint64_t n, std::size_t digit_cap = kDefaultDigitCap);

// Upper estimate of the decimal digit count of n!, never below the true count.
std::size_t factorial_digits_upper(std::uint64_t n);

// Holds n! and steps to (n+1)! with a single multiplication.
class FactorialAccumulator {
public:
    explicit FactorialAccumulator(std::uint64_t n = 0, std::size_t digit_cap = kDefaultDigitCap);

    [[nodiscard]] std::uint64_t n() const noexcept { return n_; }
    [[nodiscard]] const BigNat& value() const noexcept { return value_; }

    void advance();

private:
    std::uint64_t n_;
    std::size_t digit_cap_;
    BigNat value_;
};

// Sum of the base-`base` digits of n. Throws InvalidArgument if base < 2.
std::uint64_t digit_sum(const BigNat& n, std::uint64_t base);

// Exponent of the prime p in n!, computed as (n - s_p(n)) / (p - 1).
// Throws ConsistencyError if the division is not exact.
BigNat legendre_valuation(const BigNat& n, std::uint64_t p);

// Same quantity as sum_{i>=1} floor(n / p^i). Kept independent of
// legendre_valuation so the two can check each other.
BigNat legendre_valuation_oracle(const BigNat& n, std::uint64_t p);

// Largest r with r^k <= m. Requires k >= 2.
BigNat kth_root_floor(const BigNat& m, unsigned k);

// (B+1)(B+2)...(B+k); the empty product (k = 0) is 1.
BigNat consecutive_product(const BigNat& b, unsigned k);

// The B >= 0 with consecutive_product(B, k) == m, if any.
//
// Scans every B in [max(0, r-k-1), r+1] with r = kth_root_floor(m, k). Any
// solution lies in that window because (B+1)^k < prod(B+i) < (B+k)^k for
// k >= 2. Candidates are screened by residues before the exact product is
// formed. Requires 2 <= k <= 20 and m >= 2.
std::optional<BigNat> find_completing_b(const BigNat& m, unsigned k);

// Expansion of Q_k(x) = 2^k prod_{i=1..k}(x+1+i) - (2x+k+1)^k, with x = B-1.
// Nonnegative coefficients plus Q_k(0) > 0 give
// prod_{i=1..k}(B+i) > (B+(k-1)/2)^k for every real B >= 1.
struct PolynomialCertificate {
    unsigned k = 0;
    std::vector<mpz_class> coeffs;  // coeffs[j] multiplies x^j
    bool all_nonneg = false;
    bool positive_at_b1 = false;
    bool verified = false;

    // Horner evaluation of the stored coefficients.
    [[nodiscard]] mpz_class evaluate(const mpz_class& x) const;
};

// Direct evaluation of Q_k(x) from its defining product, for cross-checks.
mpz_class window_polynomial_direct(unsigned k, const mpz_class& x);

// Builds the certificate for k. The window lemma needs 2 <= k <= 12; larger k
// (up to 64) is accepted for exploration. The expansion is re-checked against
// window_polynomial_direct at three pseudo-random points; a mismatch throws
// ConsistencyError.
PolynomialCertificate lemma5_window_certificate(unsigned k);

}  // namespace suranyi
