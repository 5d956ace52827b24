#pragma once

#include <cstdint>
#include <string>

#include "rainbow/error.hpp"

namespace rainbow {

/// Every tunable constant in one place. The analysis behind the algorithms
/// only fixes these up to an asymptotic hierarchy, so the concrete values are
/// desk-scale defaults and everything is overridable (CLI --params).
struct ParamSet {
    double mu = 0.02;       // color class size bound, as a fraction of n
    double gamma = 0.02;    // switchable-edge density floor (gamma * n^2)
    double nu = 0.25;       // robust neighborhood threshold
    double tau = 0.25;      // expander size-window parameter (tau <= |X|/n <= 1-tau)
    double epsilon = 0.25;  // extremal partition slack
    double nu1 = 0.2;       // superextremal: size/exception slack
    double nu2 = 0.3;       // superextremal: part degree floor
    double nu3 = 0.05;      // refinement degree threshold; greedy step count ell/(10*nu3)
    double nu4 = 0.3;       // refinement cross-degree threshold
    double eta = 0.25;      // color-deletion degree loss tolerance
    double alpha = 8.0;     // color-subset selection: |U| = ceil(alpha * ell)
    int restart_budget = 1000;
    int chain_steps = 0;    // 0 = scale with n log n
    int retry_cap = 1000;
    std::uint64_t seed = 0;

    // Realization knobs (not part of the analysis): size caps for the
    // exponential exact procedures.
    int exact_threshold = 12;        // exhaustive conflict-free search fallback
    int expander_exact_max_n = 14;   // subset enumeration in the expander test

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0))
                throw Error(ErrorKind::InvalidInput, std::string(name) + " must be positive");
        };
        positive(mu, "mu");
        positive(gamma, "gamma");
        positive(nu, "nu");
        positive(tau, "tau");
        positive(epsilon, "epsilon");
        positive(nu1, "nu1");
        positive(nu2, "nu2");
        positive(nu3, "nu3");
        positive(nu4, "nu4");
        positive(eta, "eta");
        positive(alpha, "alpha");
        if (eta >= 1) throw Error(ErrorKind::InvalidInput, "eta must be < 1");
        if (restart_budget <= 0 || retry_cap <= 0 || chain_steps < 0)
            throw Error(ErrorKind::InvalidInput, "budgets must be positive");
    }
};

}  // namespace rainbow
