#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "effalg/effect_algebra.hpp"
#include "effalg/errors.hpp"
#include "effalg/fixtures.hpp"
#include "effalg/mv_algebra.hpp"

using namespace effalg;

namespace {

// Direct identity scan, independent of the validator.
bool identities_hold(const MvAlgebra& m) {
    const int n = m.n;
    const auto& bp = m.boxplus;
    const int one = m.neg[m.zero];
    for (int x = 0; x < n; ++x) {
        if (bp[x][m.zero] != x || m.neg[m.neg[x]] != x || bp[x][one] != one)
            return false;
        for (int y = 0; y < n; ++y) {
            if (bp[x][y] != bp[y][x]) return false;
            if (bp[x][m.neg[bp[x][m.neg[y]]]] != bp[y][m.neg[bp[y][m.neg[x]]]])
                return false;
            for (int z = 0; z < n; ++z)
                if (bp[bp[x][y]][z] != bp[x][bp[y][z]]) return false;
        }
    }
    return true;
}

bool same_table(const MvAlgebra& a, const MvAlgebra& b) {
    return a.n == b.n && a.zero == b.zero && a.boxplus == b.boxplus && a.neg == b.neg;
}

bool same_table(const FiniteEffectAlgebra& a, const FiniteEffectAlgebra& b) {
    return a.n == b.n && a.zero == b.zero && a.one == b.one && a.sum == b.sum;
}

} // namespace

TEST_CASE("bundled tables satisfy the identities") {
    for (auto& [name, m] : fixtures::all_mv_algebras()) {
        CAPTURE(name);
        CHECK(validate_mv(m).valid);
        CHECK(identities_hold(m));
    }
}

TEST_CASE("involution defect is reported") {
    MvAlgebra m = fixtures::luk3();
    m.neg[1] = 0;
    ValidationReport rep = validate_mv(m);
    REQUIRE_FALSE(rep.valid);
    bool mv2 = false;
    for (const auto& v : rep.violations) mv2 |= v.axiom == "MV2";
    CHECK(mv2);
}

TEST_CASE("derived operations on the three-element chain") {
    MvAlgebra m = fixtures::luk3();
    MvDerivedOps d = derived_ops(m);
    // With elements 0 < 1/2 < 1: boxdot truncates below, vee/wedge are
    // max/min, boxminus is truncated subtraction.
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            CHECK(d.boxdot[x][y] == std::max(x + y - 2, 0));
            CHECK(d.vee[x][y] == std::max(x, y));
            CHECK(d.wedge[x][y] == std::min(x, y));
            CHECK(d.boxminus[x][y] == std::max(x - y, 0));
        }
}

TEST_CASE("dictionary between MV-algebras and MV-effect algebras") {
    CHECK(same_table(mv_to_effect_algebra(fixtures::luk3()), fixtures::chain3()));
    CHECK(same_table(effect_algebra_to_mv(fixtures::chain3()), fixtures::luk3()));

    // Round trips on both bundled algebras.
    for (auto& [name, m] : fixtures::all_mv_algebras()) {
        CAPTURE(name);
        FiniteEffectAlgebra e = mv_to_effect_algebra(m);
        CHECK(validate_effect_algebra(e).valid);
        CHECK(classify(e).is_mv_effect_algebra);
        CHECK(same_table(effect_algebra_to_mv(e), m));
    }
    FiniteEffectAlgebra d = fixtures::diamond();
    MvAlgebra dm = effect_algebra_to_mv(d);
    CHECK(validate_mv(dm).valid);
    CHECK(same_table(mv_to_effect_algebra(dm), d));
    // The diamond totalizes to the Boolean join: every element idempotent.
    for (int x = 0; x < dm.n; ++x) CHECK(dm.boxplus[x][x] == x);
    CHECK(dm.neg == std::vector<int>{3, 2, 1, 0});

    // 2-chain <-> 2-element Boolean algebra.
    MvAlgebra two = effect_algebra_to_mv(fixtures::chain2());
    CHECK(two.boxplus == std::vector<std::vector<int>>{{0, 1}, {1, 1}});
    CHECK(two.neg == std::vector<int>{1, 0});

    // Non-MV inputs are rejected.
    CHECK_THROWS_AS(effect_algebra_to_mv(fixtures::mo2()), PreconditionError);
}

TEST_CASE("boolean skeleton") {
    CHECK(boolean_skeleton(fixtures::luk3()) == std::vector<int>{0, 2});
    CHECK(boolean_skeleton(fixtures::luk3_squared()) == std::vector<int>{0, 2, 6, 8});
    MvAlgebra dm = effect_algebra_to_mv(fixtures::diamond());
    CHECK(boolean_skeleton(dm) == std::vector<int>{0, 1, 2, 3});

    for (auto& [name, m] : fixtures::all_mv_algebras()) {
        CAPTURE(name);
        CHECK(is_boolean_subalgebra(m, boolean_skeleton(m)));
    }
    // The full chain is closed and distributive but not idempotent.
    CHECK_FALSE(is_boolean_subalgebra(fixtures::luk3(), {0, 1, 2}));
    // Dropping the unit disqualifies immediately.
    CHECK_FALSE(is_boolean_subalgebra(fixtures::luk3(), {0}));
}

TEST_CASE("symmetric difference") {
    MvAlgebra m = fixtures::luk3_squared();
    for (int a = 0; a < m.n; ++a) {
        CHECK(symmetric_difference(m, a, a) == 0);
        CHECK(symmetric_difference(m, a, 0) == a);
        for (int b = 0; b < m.n; ++b)
            CHECK(symmetric_difference(m, a, b) == symmetric_difference(m, b, a));
    }
    CHECK(symmetric_difference(fixtures::luk3(), 1, 2) == 1);
    MvAlgebra dm = effect_algebra_to_mv(fixtures::diamond());
    CHECK(symmetric_difference(dm, 1, 2) == 3); // disjoint join is the unit
}

TEST_CASE("every single-cell mutation agrees with the independent scan") {
    for (auto& [name, m] : fixtures::all_mv_algebras()) {
        CAPTURE(name);
        int survivors = 0;
        for (int x = 0; x < m.n; ++x) {
            for (int v = 0; v < m.n; ++v) {
                if (v != m.neg[x]) {
                    MvAlgebra mut = m;
                    mut.neg[x] = v;
                    bool accepted = validate_mv(mut).valid;
                    REQUIRE(accepted == identities_hold(mut));
                    survivors += accepted;
                }
                for (int y = 0; y < m.n; ++y)
                    if (v != m.boxplus[x][y]) {
                        MvAlgebra mut = m;
                        mut.boxplus[x][y] = v;
                        bool accepted = validate_mv(mut).valid;
                        REQUIRE(accepted == identities_hold(mut));
                        survivors += accepted;
                    }
            }
        }
        // Both bundled tables are rigid: no single-cell change stays MV.
        CHECK(survivors == 0);
    }
}
