#pragma once

#include <optional>
#include <vector>

#include "effalg/rational.hpp"
#include "effalg/report.hpp"

namespace effalg {

inline constexpr int kUndef = -1;

// Finite partial algebra (E; +, 0, 1) given by an n x n table.
// sum[a][b] == kUndef means a+b is not defined.
struct FiniteEffectAlgebra {
    int n = 0;
    int zero = 0;
    int one = 0;
    std::vector<std::vector<int>> sum;

    bool defined(int a, int b) const { return sum[a][b] != kUndef; }
    int plus(int a, int b) const { return sum[a][b]; }
};

// Structural sanity (shape, index ranges). Throws StructuralError.
void check_structure(const FiniteEffectAlgebra& e);

// Checks the four effect-algebra axioms exhaustively.
//   EA1 commutativity (definedness both ways, values equal)
//   EA2 associativity (with definedness propagation)
//   EA3 unique orthosupplement
//   EA4 zero-one law (a+1 defined only for a = 0)
// Every violation is reported with a witness tuple.
ValidationReport validate_effect_algebra(const FiniteEffectAlgebra& e);

// Order-theoretic derived data. Requires a valid algebra.
struct DerivedOrder {
    std::vector<std::vector<bool>> leq;  // leq[a][b]: exists c with a+c = b
    std::vector<int> perp;               // unique x with a+x = 1
    std::vector<std::vector<int>> minus; // minus[b][a] = the c with a+c = b, else kUndef

    bool le(int a, int b) const { return leq[a][b]; }
};
DerivedOrder derive_order(const FiniteEffectAlgebra& e);

// Meet/join in the derived order; nullopt when no greatest lower (least upper)
// bound exists.
std::optional<int> meet(const DerivedOrder& ord, int a, int b);
std::optional<int> join(const DerivedOrder& ord, int a, int b);

struct AlgebraClass {
    bool is_lattice = false;
    bool is_orthomodular = false;        // lattice and a <= b' implies a ^ b = 0
    bool is_mv_effect_algebra = false;   // lattice and a ^ b = 0 implies a <= b'
};
AlgebraClass classify(const FiniteEffectAlgebra& e);

// Ideal test: downward closed and closed under existing sums. Empty sets are
// not ideals (an ideal contains 0).
bool is_ideal(const FiniteEffectAlgebra& e, const std::vector<int>& subset);

struct QuotientResult {
    FiniteEffectAlgebra algebra;
    std::vector<int> class_of;        // original element -> quotient index
    std::vector<int> representative;  // quotient index -> least original element
};

// Quotient of an MV-effect algebra by an ideal. Classes are the blocks of
// a ~ b iff (a v b) - (a ^ b) lies in the ideal; the sum [a]+[b] is defined
// iff some pair of representatives has a defined sum. Requires
// classify(e).is_mv_effect_algebra and is_ideal(e, ideal); the result is
// validated before being returned.
QuotientResult quotient_mv(const FiniteEffectAlgebra& e, const std::vector<int>& ideal);

// States as exact rational vectors indexed by elements.
struct StateVector {
    RatVec values;
};

// s(0)=0, s(1)=1, s additive on defined sums, 0 <= s <= 1. Exact.
bool is_state(const FiniteEffectAlgebra& e, const StateVector& s);

struct StatePolytope {
    bool empty = true;
    int dim = 0;                      // affine dimension of the polytope
    std::vector<StateVector> vertices; // deduplicated, lexicographically sorted
};

// Exact vertex enumeration of the polytope of states.
StatePolytope state_space(const FiniteEffectAlgebra& e);

// An ordering set: if s(a) <= s(b) for every s in the set then a <= b.
// Requires every member to be a state. On failure returns the offending pair.
struct OrderingSetResult {
    bool ordering = false;
    std::optional<std::pair<int, int>> witness; // (a, b): dominated but not below
};
OrderingSetResult is_ordering_set(const FiniteEffectAlgebra& e,
                                  const std::vector<StateVector>& states);

}  // namespace effalg
