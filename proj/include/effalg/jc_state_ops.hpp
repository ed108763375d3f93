#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "effalg/hermitian.hpp"

namespace effalg {

// Projection-valued measure checks: each element Hermitian idempotent,
// mutually orthogonal, summing to the identity.
ValidationReport validate_pvm(const std::vector<CMat>& pvm, const Tolerances& tol = {});

// a -> sum_i p a p over the measure. Requires a valid PVM.
HermitianMap pinching_map(const std::vector<CMat>& pvm, const Tolerances& tol = {});

struct MapCheckReport {
    bool unital = false;
    bool positive = false;    // sampled rank-one inputs plus basis projections
    bool idempotent = false;
    bool ok = false;
    double unital_err = 0;    // operator norms / worst eigenvalues behind the flags
    double idem_err = 0;
    double min_psd_eig = 0;
};

// Positive unital idempotent check with seeded positivity sampling.
MapCheckReport check_state_operator(const HermitianMap& m, const Tolerances& tol = {},
                                    uint64_t seed = 1, int samples = 10000);

struct SquareGaps {
    double lhs_gap; // min eig of m(m(a)^2) - m(a)^2
    double rhs_gap; // min eig of m(a^2) - m(m(a)^2)
};
// Two-sided square inequality for a positive unital idempotent map at a
// Hermitian a; both gaps >= -eps_psd when the map is as advertised.
SquareGaps square_inequality_gaps(const HermitianMap& m, const CMat& a);

struct CeResult {
    bool is_ce = false;
    double basis_residual = 0;   // worst symmetrized-triple membership defect
    double sampled_residual = 0; // worst m(m(a) b m(a)) vs m(a) m(b) m(a)
    std::optional<std::pair<CMat, CMat>> witness; // effect pair breaking the identity
};
// Conditional expectation test: the range must be closed under symmetrized
// triple products. Decided on a range basis; cross-checked on seeded random
// effect pairs. Disagreement raises ConsistencyError.
CeResult is_conditional_expectation(const HermitianMap& m, const Tolerances& tol = {},
                                    uint64_t seed = 1, int samples = 200);

struct JordanResult {
    bool is_jordan = false;
    double residual = 0;
    std::optional<CMat> witness;  // Hermitian a with m(a^2) != m(m(a)^2)
    bool kernel_square_ok = true; // m(k) = 0 iff m(k^2) = 0 on the kernel, spot-checked
};
// m(a^2) = m(m(a)^2) for all a in the span of domain_basis (whole algebra
// when empty), decided by polarization over basis pairs.
JordanResult is_jordan_state_operator(const HermitianMap& m, const Tolerances& tol = {},
                                      const std::vector<CMat>& domain_basis = {});

struct EquivalenceReport {
    double square_residual = 0;       // m(a^2) vs m(a)^2
    double jordan_residual = 0;       // worst m(a . b) vs m(a) . m(b) over a basis
    double triple_residual = 0;       // worst m(aba) vs m(a) m(b) m(a) over a basis
    bool square = false, jordan = false, triple = false;
    bool agree = false;               // all three flags equal
};
// At a fixed a, multiplicativity in the three equivalent senses; the flags
// must agree for a positive unital map.
EquivalenceReport equivalence_lemma_check(const HermitianMap& m, const CMat& a,
                                          const Tolerances& tol = {});

// Averaged variant for positive unital idempotent maps: (a) m(a^2) = m(m(a)^2),
// (b) m(a.b) = m(m(a).m(b)) over a basis of b, (c) m(aba) = m(m(a)m(b)m(a))
// over a basis of b. The three flags are again equivalent and must agree.
EquivalenceReport second_lemma_check(const HermitianMap& m, const CMat& a,
                                     const Tolerances& tol = {});

// Largest projection e with: m kills the complement (m(1-e) = 0), m(a) =
// m(eae), and e commutes with every m(a). Computed from the trace adjoint
// witness w = m*(1): a projection f satisfies m(f) = 0 iff f <= ker-projection
// of w. Certified against spectral candidates from the kernel of m and the
// displacement laws; certification failure raises CertificationError.
CMat support_projection(const HermitianMap& m, const Tolerances& tol = {},
                        uint64_t seed = 1);

// Restriction a -> m(a) e to the corner algebra of the support projection,
// realized on the compressed space. Requires e = support_projection(m).
// The result is verified to be a faithful conditional expectation.
HermitianMap compress_to_support(const HermitianMap& m, const CMat& e,
                                 const Tolerances& tol = {}, uint64_t seed = 1);

struct Decomposition {
    CMat support;                      // e
    HermitianMap mu;                   // a -> m(a) e + (1-e) a (1-e)
    HermitianMap phi;                  // m restricted to range(mu); m = phi after mu
    std::vector<CMat> multiplicative_domain; // basis of {a : m(a^2) = m(m(a)^2)}
};
// Factorization m = phi after mu with mu a faithful conditional expectation
// onto the multiplicative domain and phi a Jordan-multiplicative unital map
// on it. All claims are verified within tolerances before returning.
Decomposition decompose_state_operator(const HermitianMap& m, const Tolerances& tol = {},
                                       uint64_t seed = 1);

// Extends an additive idempotent effect assignment to the linear map it
// determines: p(x) = s f(x/s) on positive x, extended by differences of
// positive parts. Additivity, idempotence, homogeneity (rational and
// irrational scalars) and decomposition independence are spot-checked on
// seeded samples; failure raises PreconditionError.
HermitianMap extend_to_linear(int d, const std::function<CMat(const CMat&)>& effect_map,
                              const Tolerances& tol = {}, uint64_t seed = 1);

}  // namespace effalg
