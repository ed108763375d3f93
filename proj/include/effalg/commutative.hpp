#pragma once

#include <optional>
#include <vector>

#include "effalg/rational.hpp"
#include "effalg/report.hpp"

namespace effalg {

// Row-stochastic matrix with exact entries (doubles embed exactly).
struct StochasticMatrix {
    RatMat t;

    int n() const { return (int)t.size(); }
};

struct FiniteProbSpace {
    RatVec p; // nonnegative, sums to 1
};

struct BlockPartition {
    std::vector<std::vector<int>> blocks; // partition of {0..n-1}
};

void check_structure(const StochasticMatrix& t);
void check_structure(const FiniteProbSpace& sp, const BlockPartition* blocks = nullptr);

// Entrywise nonnegative, unit row sums, T^2 = T; comparisons within eps.
ValidationReport validate_stochastic_idempotent(const StochasticMatrix& t,
                                                double eps = 1e-9);

// Recurrent-class structure of a stochastic idempotent matrix:
// recurrent states i (t[i][i] > 0) split into classes with a common row
// pi_k supported exactly on the class; every row is a mixture of the pi_k.
struct RecurrentStructure {
    std::vector<std::vector<int>> classes; // recurrent classes, each sorted
    std::vector<RatVec> pi;                // class rows, full length
    RatMat alpha;                          // n x k mixture weights per row
};
RecurrentStructure analyze_idempotent(const StochasticMatrix& t, double eps = 1e-9);

struct MinClosureResult {
    bool strong = false;
    // On failure: f, g with T(min(Tf, Tg)) != min(Tf, Tg).
    std::optional<std::pair<RatVec, RatVec>> witness;
    RatVec min_image, mapped; // min(Tf, Tg) and T of it, for the witness
};
// Range of T closed under pointwise minimum, decided exactly on the class
// indicators T 1_C; cross-checked on seeded random pairs.
MinClosureResult is_strong_commutative(const StochasticMatrix& t, double eps = 1e-9,
                                       uint64_t seed = 1);

struct ProductClosureResult {
    bool ce = false;
    std::optional<std::pair<RatVec, RatVec>> witness;
};
// Range closed under pointwise products, decided exactly on the class
// indicators. Must agree with is_strong_commutative; disagreement raises
// ConsistencyError.
ProductClosureResult is_ce_commutative(const StochasticMatrix& t, double eps = 1e-9,
                                       uint64_t seed = 1);

struct JordanCommutativeResult {
    bool jordan = false;
    std::optional<std::pair<int, int>> witness; // coordinate pair breaking T(fg)=T(Tf Tg)
    std::vector<int> fixed_points;              // K: rows equal to coordinate vectors
    RatMat phi;                                 // n x |K| column submatrix, Tf = phi(f|K)
    bool extension_ok = false;                  // phi(g)|K = g and phi positive unital
};
// T(f^2) = T((Tf)^2) iff every class row is a point mass; then T evaluates
// through the fixed-point set K. Non-Jordan inputs yield jordan = false with
// a witness and no characterization.
JordanCommutativeResult jordan_support_characterization(const StochasticMatrix& t,
                                                        double eps = 1e-9);

struct KernelIdealResult {
    std::vector<int> support;  // K: recurrent states
    bool verified = false;     // T e_x = 0 iff x outside K, checked exactly
};
// The functions killed by T are exactly those vanishing on the support.
KernelIdealResult kernel_ideals(const StochasticMatrix& t, double eps = 1e-9);

// Blockwise conditional average: on a block of positive measure the mean of
// a against the normalized block measure, 0 on null blocks. Exact.
RatVec mv_conditional_expectation(const FiniteProbSpace& sp, const BlockPartition& blocks,
                                  const RatVec& a);

// The integral identity behind the conditional average: for every union b of
// blocks, sum_x E(a)(x) 1_b(x) p(x) = sum_{x in b} a(x) p(x). Exact; returns
// the worst offending union if any (only possible on a bug).
bool verify_conditional_identity(const FiniteProbSpace& sp, const BlockPartition& blocks,
                                 const RatVec& a, const RatVec& expectation);

struct QuotientAveraging {
    StochasticMatrix t;            // on the support, blockwise averaging
    std::vector<int> kept;         // original indices of the retained states
};
// Drop null states, average within blocks of positive measure. The result is
// verified to be a strong stochastic idempotent whose range is spanned by
// the surviving block indicators.
QuotientAveraging quotient_strong_operator(const FiniteProbSpace& sp,
                                           const BlockPartition& blocks);

struct InducedCeReport {
    bool ok = false;
    RatVec weights;                    // w = T^t s, the transported measure
    std::vector<std::vector<int>> crisp; // unions of basins realizing crisp range elements
    std::string failure;
};
// For a strong idempotent T and a probability vector s, the composition
// m = s after T makes Ta the conditional average of a with respect to the
// range of T: for every crisp b in the range,
// sum_x (Ta)(x) 1_b(x) w(x) = sum_{x in b} a(x) w(x), exactly, on the
// coordinate basis and seeded random rational vectors.
InducedCeReport mv_ce_from_strong_operator(const StochasticMatrix& t, const RatVec& s,
                                           uint64_t seed = 1);

}  // namespace effalg
