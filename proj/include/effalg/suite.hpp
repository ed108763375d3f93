#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "effalg/hermitian.hpp"
#include "effalg/json_io.hpp"

namespace effalg {

struct SuiteConfig {
    std::uint64_t seed = 42;
    Tolerances tol{};
    int samples = 1000;   // size of each seeded random family
    int mutations = 100;  // single-cell table mutations per fixture
    int composites = 100; // random block-map decompositions
};

struct TheoremResult {
    std::string name;
    bool pass = false;
    long long checks = 0;                // individual verifications performed
    std::vector<std::string> witnesses;  // failure descriptions, empty on pass
    double ms = 0;                       // wall time; kept out of machine output
};

struct SuiteSummary {
    SuiteConfig config;
    std::vector<TheoremResult> results;  // sorted by name

    bool all_pass() const;
};

// Each check covers one verified statement end to end; they are independent
// and deterministic for a fixed seed.
TheoremResult check_axiom_gate(const SuiteConfig& cfg);
TheoremResult check_state_operator_laws(const SuiteConfig& cfg);
TheoremResult check_faithful_implies_strong(const SuiteConfig& cfg);
TheoremResult check_quotient_faithfulness(const SuiteConfig& cfg);
TheoremResult check_induced_states(const SuiteConfig& cfg);
TheoremResult check_kadison_schwarz(const SuiteConfig& cfg);
TheoremResult check_pinching_operator(const SuiteConfig& cfg);
TheoremResult check_multiplicative_domain(const SuiteConfig& cfg);
TheoremResult check_averaged_multiplicativity(const SuiteConfig& cfg);
TheoremResult check_support_decomposition(const SuiteConfig& cfg);
TheoremResult check_strong_equals_ce(const SuiteConfig& cfg);
TheoremResult check_conditional_identity(const SuiteConfig& cfg);
TheoremResult check_quotient_averaging(const SuiteConfig& cfg);

SuiteSummary run_suite(const SuiteConfig& cfg);

// Deterministic: sorted keys, no timing, byte-identical across runs with the
// same configuration.
Json suite_to_json(const SuiteSummary& s);
// Human-readable table including per-check wall time.
std::string suite_to_markdown(const SuiteSummary& s);

// Shared generators, reused by tests.
StochasticMatrix random_idempotent_stochastic(int n, Rng& rng);
HermitianMap random_block_state_operator(int d, Rng& rng, CMat* support_out = nullptr);

}  // namespace effalg
