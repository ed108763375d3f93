#pragma once

#include <string>
#include <vector>

#include "effalg/commutative.hpp"
#include "effalg/effect_algebra.hpp"
#include "effalg/hermitian.hpp"
#include "effalg/mv_algebra.hpp"

namespace effalg {
namespace fixtures {

// Effect algebras. Element 0 is the zero unless stated.
FiniteEffectAlgebra chain2();        // {0, 1}
FiniteEffectAlgebra chain3();        // {0, u, 1}, u+u = 1
FiniteEffectAlgebra diamond();       // {0, a, b, 1}, a+b = 1, a+a undefined
FiniteEffectAlgebra mo2();           // {0, a, a', b, b', 1}, only complement sums

// MV-algebras.
MvAlgebra luk3();                    // {0, 1/2, 1} with truncated addition
MvAlgebra luk3_squared();            // product of two copies, index 3*i + j

// Effect-algebra forms of the MV fixtures.
FiniteEffectAlgebra luk3_ea();
FiniteEffectAlgebra luk3_squared_ea();

// tau(x, y) = (x, x) on the product algebra; strong, not faithful.
std::vector<int> luk3_squared_first_coordinate();

// All bundled effect algebras (including the MV-derived ones), with names.
std::vector<std::pair<std::string, FiniteEffectAlgebra>> all_effect_algebras();
std::vector<std::pair<std::string, MvAlgebra>> all_mv_algebras();

// Projection-valued measures.
std::vector<CMat> pinching2();       // diag basis of C^2
std::vector<CMat> pinching3();       // rank 2 + rank 1 in C^3

// Stochastic idempotents.
StochasticMatrix collapse2();        // [[1,0],[1,0]]: strong
StochasticMatrix straddle3();        // [[1,0,0],[0,1,0],[1/2,1/2,0]]: not strong

// Probability spaces with block partitions.
struct ProbFixture {
    FiniteProbSpace space;
    BlockPartition blocks;
};
ProbFixture uniform4();              // P = (1/4,...), blocks {0,1} {2,3}
ProbFixture halfnull4();             // P = (1/2, 1/2, 0, 0), same blocks

}  // namespace fixtures
}  // namespace effalg
