#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "suranyi/interval.hpp"

namespace suranyi {

// Reference evaluations in plain round-to-nearest MPFR at a chosen precision.
// They share no code with the Interval kernel and serve as the independent
// side of containment checks.
namespace oracle {

Mpfr rational(long numerator, long denominator, Precision prec);
Mpfr phi1(const Mpfr& t, const Mpfr& x);
Mpfr phi2(const Mpfr& t, const Mpfr& x);
Mpfr c_func(const Mpfr& t, const Mpfr& x);
Mpfr lgamma(const Mpfr& x);
Mpfr digamma(const Mpfr& x);

}  // namespace oracle

struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct SelfCheckOptions {
    Precision precision = kDefaultPrecision;
    std::uint64_t seed = 0x5eed;
    std::uint64_t valuation_n_max = 100'000;
    std::uint64_t digit_sum_n_max = 1'000'000;
    int root_samples = 1'000;
    int containment_samples = 10'000;
    std::uint64_t lgamma_n_max = 300;
    // Test hook: perturbs the computed t_thresh before the table check.
    bool corrupt_constants = false;
};

// Each returns one named pass/fail record.
PropertyResult check_constants_table(const SelfCheckOptions& opts);
PropertyResult check_valuation_oracle(const SelfCheckOptions& opts);
PropertyResult check_digit_sum_bound(const SelfCheckOptions& opts);
PropertyResult check_root_bracketing(const SelfCheckOptions& opts);
PropertyResult check_interval_containment(const SelfCheckOptions& opts);
PropertyResult check_lgamma_factorials(const SelfCheckOptions& opts);
PropertyResult check_r_monotonicity(const SelfCheckOptions& opts);
PropertyResult check_known_solution_eq3(const SelfCheckOptions& opts);

// All of the above, in that order.
std::vector<PropertyResult> run_self_checks(const SelfCheckOptions& opts);

}  // namespace suranyi
