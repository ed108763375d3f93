#pragma once

#include <optional>
#include <vector>

#include "effalg/effect_algebra.hpp"
#include "effalg/report.hpp"

namespace effalg {

// Self-map of an algebra given elementwise.
struct ElementMap {
    std::vector<int> tau;

    int operator()(int a) const { return tau[a]; }
};

struct StateOperatorReport {
    bool is_state_operator = false;
    std::vector<Violation> violations;     // axiom in {"(i)", "(ii)", "(iii)"}
    std::optional<bool> is_strong;         // set when is_state_operator
    std::optional<bool> is_faithful;       // set when is_state_operator
    std::optional<std::pair<int, int>> strong_witness; // pair where tau misses the meet
    std::vector<int> kernel;               // elements sent to zero, sorted
    // Derived laws every state operator satisfies; nonempty only on a bug.
    std::vector<Violation> law_failures;
};

// Checks, on a valid algebra e:
//   (i)   tau(1) = 1
//   (ii)  a+b defined implies tau(a)+tau(b) defined and equal to tau(a+b)
//   (iii) tau(tau(a)) = tau(a)
// When all hold, also decides strongness (tau fixes existing meets of range
// elements), faithfulness (kernel is {0}), and rechecks the derived laws
// (zero fixed, orthosupplement exchange, monotonicity with difference
// exchange, meet/join bounds, range closure).
StateOperatorReport validate_state_operator(const FiniteEffectAlgebra& e,
                                            const ElementMap& m);

// All state operators on e, lexicographically sorted by the tau vector.
// Refuses with the avoided count n^n when n exceeds the bound.
std::vector<ElementMap> enumerate_state_operators(const FiniteEffectAlgebra& e,
                                                  int bound = 8);

struct QuotientStateOp {
    QuotientResult quotient; // by the kernel ideal of tau
    ElementMap tau;          // induced map on classes; always faithful
};

// Quotient of an MV-effect algebra by the kernel ideal of a state operator,
// with the induced operator on classes. The kernel is verified to be an
// ideal, the induced map to be well defined, and the result to be a faithful
// state operator.
QuotientStateOp quotient_state_operator(const FiniteEffectAlgebra& e, const ElementMap& tau);

// s = omega after tau. Requires tau to be a state operator, omega to be a
// member of the supplied set, and the set to be an ordering set of states.
// The result is verified to be a state.
StateVector induced_state(const FiniteEffectAlgebra& e, const ElementMap& tau,
                          const StateVector& omega,
                          const std::vector<StateVector>& ordering_set);

}  // namespace effalg
