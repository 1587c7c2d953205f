// checks.hpp: randomized acceptance suite. Each check draws its inputs from a
// seeded generator up front, evaluates them in parallel and reduces in input
// order, so a given seed always produces the same numbers.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nhqhe {

struct CheckResult {
    int id;
    std::string name;
    bool passed;
    double measured;    // worst case over the sampled inputs
    std::string limit;  // acceptance condition on `measured`
    std::string detail;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

CheckResult check_otto_efficiency(std::uint64_t seed);
CheckResult check_closed_form_reproduction(std::uint64_t seed);
CheckResult check_closed_loop_state_functions(std::uint64_t seed);
CheckResult check_hermitian_triviality(std::uint64_t seed);
CheckResult check_green_theorem(std::uint64_t seed);
CheckResult check_biorthonormal_unitarity(std::uint64_t seed);
CheckResult check_adiabatic_convergence(std::uint64_t seed);
CheckResult check_oracle_convergence(std::uint64_t seed);
CheckResult check_classical_cycle(std::uint64_t seed);
CheckResult check_carnot_bound(std::uint64_t seed);

std::vector<CheckResult> run_acceptance_suite(std::uint64_t seed = kDefaultSeed);

// "[PASS] 3 closed-loop state functions: worst 1.2e-15 (require <= 1e-09) ..."
std::string format_result(const CheckResult& r);

}  // namespace nhqhe
