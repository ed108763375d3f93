#pragma once

#include <vector>

#include "effalg/effect_algebra.hpp"
#include "effalg/report.hpp"

namespace effalg {

// Total algebra (M; boxplus, neg, 0) with 1 = neg(0).
struct MvAlgebra {
    int n = 0;
    int zero = 0;
    std::vector<std::vector<int>> boxplus;
    std::vector<int> neg;

    int one() const { return neg[zero]; }
};

void check_structure(const MvAlgebra& m);

// Exhaustive identity checking:
//   MV1 commutative monoid with neutral 0 (split witnesses: comm/assoc/unit)
//   MV2 neg(neg(x)) = x
//   MV3 x boxplus 1 = 1
//   MV4 x boxplus neg(x boxplus neg(y)) = y boxplus neg(y boxplus neg(x))
ValidationReport validate_mv(const MvAlgebra& m);

struct MvDerivedOps {
    std::vector<std::vector<int>> boxdot;   // neg(neg x boxplus neg y)
    std::vector<std::vector<int>> vee;      // neg(neg x boxplus y) boxplus y
    std::vector<std::vector<int>> wedge;    // neg(neg x vee neg y)
    std::vector<std::vector<int>> boxminus; // neg(neg x boxplus y)
};
MvDerivedOps derived_ops(const MvAlgebra& m);

// Partialization: a+b defined iff a boxdot b = 0, value a boxplus b.
// Requires a valid MV-algebra; the result is validated.
FiniteEffectAlgebra mv_to_effect_algebra(const MvAlgebra& m);

// Totalization of a lattice effect algebra with the disjointness property:
// a boxplus b = a + (a' ^ b). Requires classify(e).is_mv_effect_algebra;
// the result is validated. Round trips with mv_to_effect_algebra on the
// same element indices.
MvAlgebra effect_algebra_to_mv(const FiniteEffectAlgebra& e);

// Elements with x boxplus x = x. Always a sublattice containing 0 and 1;
// returned sorted.
std::vector<int> boolean_skeleton(const MvAlgebra& m);

// a delta b = (a vee b) ominus (a wedge b). Commutative, a delta a = 0,
// a delta 0 = a.
int symmetric_difference(const MvAlgebra& m, int a, int b);

// true iff the subset contains 0 and 1, is closed under boxplus and neg,
// every member is idempotent, and the lattice restricted to it is
// distributive.
bool is_boolean_subalgebra(const MvAlgebra& m, const std::vector<int>& subset);

}  // namespace effalg
