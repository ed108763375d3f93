#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "effalg/commutative.hpp"
#include "effalg/errors.hpp"
#include "effalg/fixtures.hpp"
#include "effalg/rational.hpp"
#include "effalg/suite.hpp"

using namespace effalg;

namespace {

RatVec apply_rows(const RatMat& t, const RatVec& f) {
    RatVec out(t.size(), 0);
    for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = 0; j < t[i].size(); ++j) out[i] += t[i][j] * f[j];
    return out;
}

}  // namespace

TEST_CASE("idempotent validation on the fixtures and near misses") {
    CHECK(validate_stochastic_idempotent(fixtures::collapse2()).valid);
    CHECK(validate_stochastic_idempotent(fixtures::straddle3()).valid);

    SUBCASE("a permutation is stochastic but not idempotent") {
        StochasticMatrix swap{{{0, 1}, {1, 0}}};
        auto rep = validate_stochastic_idempotent(swap);
        CHECK_FALSE(rep.valid);
    }
    SUBCASE("negative entries are reported") {
        StochasticMatrix neg{{{Rat(3, 2), Rat(-1, 2)}, {0, 1}}};
        CHECK_FALSE(validate_stochastic_idempotent(neg).valid);
    }
    SUBCASE("row sums off one are reported") {
        StochasticMatrix off{{{Rat(1, 2), 0}, {0, 1}}};
        CHECK_FALSE(validate_stochastic_idempotent(off).valid);
    }
    SUBCASE("ragged tables are structural errors") {
        StochasticMatrix ragged{{{1, 0}, {1}}};
        CHECK_THROWS_AS(validate_stochastic_idempotent(ragged), StructuralError);
    }
    SUBCASE("tolerance separates near-idempotents from exact failures") {
        // perturb the collapse by 1e-12 with exact row repair: the
        // idempotence defect is 1e-24, inside 1e-9 but nonzero
        Rat eps = rat_from_string("1/1000000000000");
        StochasticMatrix near{{{1 - eps, eps}, {1, 0}}};
        CHECK(validate_stochastic_idempotent(near, 1e-9).valid);
        CHECK_FALSE(validate_stochastic_idempotent(near, 0.0).valid);
    }
}

TEST_CASE("recurrent structure of the bundled operators") {
    auto s3 = analyze_idempotent(fixtures::straddle3());
    CHECK(s3.classes == std::vector<std::vector<int>>{{0}, {1}});
    REQUIRE(s3.pi.size() == 2);
    CHECK(s3.pi[0] == RatVec{1, 0, 0});
    CHECK(s3.pi[1] == RatVec{0, 1, 0});
    REQUIRE(s3.alpha.size() == 3);
    CHECK(s3.alpha[0] == RatVec{1, 0});
    CHECK(s3.alpha[1] == RatVec{0, 1});
    CHECK(s3.alpha[2] == RatVec{Rat(1, 2), Rat(1, 2)});

    auto c2 = analyze_idempotent(fixtures::collapse2());
    CHECK(c2.classes == std::vector<std::vector<int>>{{0}});
    CHECK(c2.alpha == RatMat{{1}, {1}});
}

TEST_CASE("min closure separates the collapse from the straddle") {
    auto good = is_strong_commutative(fixtures::collapse2());
    CHECK(good.strong);
    CHECK_FALSE(good.witness.has_value());

    auto bad = is_strong_commutative(fixtures::straddle3());
    CHECK_FALSE(bad.strong);
    REQUIRE(bad.witness.has_value());
    // frozen witness: min of the two basin images is (0, 0, 1/2), which the
    // operator sends to zero
    CHECK(bad.min_image == RatVec{0, 0, Rat(1, 2)});
    CHECK(bad.mapped == RatVec{0, 0, 0});
    // re-verify the witness against plain matrix arithmetic
    const auto& [f, g] = *bad.witness;
    RatVec tf = apply_rows(fixtures::straddle3().t, f);
    RatVec tg = apply_rows(fixtures::straddle3().t, g);
    RatVec mn(tf.size());
    for (size_t i = 0; i < mn.size(); ++i) mn[i] = std::min(tf[i], tg[i]);
    CHECK(mn == bad.min_image);
    CHECK(apply_rows(fixtures::straddle3().t, mn) == bad.mapped);
    CHECK(mn != bad.mapped);
}

TEST_CASE("product closure agrees with min closure on fixtures and samples") {
    CHECK(is_ce_commutative(fixtures::collapse2()).ce);
    auto bad = is_ce_commutative(fixtures::straddle3());
    CHECK_FALSE(bad.ce);
    CHECK(bad.witness.has_value());

    Rng rng(314);
    for (int t = 0; t < 20; ++t) {
        int n = 2 + static_cast<int>(rng() % 5);
        auto m = random_idempotent_stochastic(n, rng);
        REQUIRE(validate_stochastic_idempotent(m).valid);
        CHECK(is_strong_commutative(m).strong == is_ce_commutative(m).ce);
    }
}

TEST_CASE("square law holds exactly when class rows are point masses") {
    // the straddle is Jordan multiplicative even though it is not strong
    auto s3 = jordan_support_characterization(fixtures::straddle3());
    CHECK(s3.jordan);
    CHECK(s3.fixed_points == std::vector<int>{0, 1});
    REQUIRE(s3.phi.size() == 3);
    CHECK(s3.phi[0] == RatVec{1, 0});
    CHECK(s3.phi[1] == RatVec{0, 1});
    CHECK(s3.phi[2] == RatVec{Rat(1, 2), Rat(1, 2)});
    CHECK(s3.extension_ok);

    auto c2 = jordan_support_characterization(fixtures::collapse2());
    CHECK(c2.jordan);
    CHECK(c2.fixed_points == std::vector<int>{0});

    // blockwise averaging has a spread class row, so the square law fails
    StochasticMatrix avg{{{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}}};
    auto rep = jordan_support_characterization(avg);
    CHECK_FALSE(rep.jordan);
    CHECK(rep.witness.has_value());
}

TEST_CASE("kernel is the ideal of functions vanishing on the support") {
    auto s3 = kernel_ideals(fixtures::straddle3());
    CHECK(s3.support == std::vector<int>{0, 1});
    CHECK(s3.verified);
    auto c2 = kernel_ideals(fixtures::collapse2());
    CHECK(c2.support == std::vector<int>{0});
    CHECK(c2.verified);
}

TEST_CASE("blockwise conditional averages, including null blocks") {
    RatVec a{1, 0, 1, 1};
    auto u = fixtures::uniform4();
    RatVec eu = mv_conditional_expectation(u.space, u.blocks, a);
    CHECK(eu == RatVec{Rat(1, 2), Rat(1, 2), 1, 1});
    CHECK(verify_conditional_identity(u.space, u.blocks, a, eu));

    auto h = fixtures::halfnull4();
    RatVec eh = mv_conditional_expectation(h.space, h.blocks, a);
    CHECK(eh == RatVec{Rat(1, 2), Rat(1, 2), 0, 0});
    CHECK(verify_conditional_identity(h.space, h.blocks, a, eh));

    // averaging is idempotent: E(E(a)) = E(a)
    CHECK(mv_conditional_expectation(u.space, u.blocks, eu) == eu);
    CHECK(mv_conditional_expectation(h.space, h.blocks, eh) == eh);
}

TEST_CASE("conditional average preconditions") {
    auto u = fixtures::uniform4();
    SUBCASE("values must lie in the unit interval") {
        CHECK_THROWS_AS(mv_conditional_expectation(u.space, u.blocks, RatVec{2, 0, 0, 0}),
                        PreconditionError);
    }
    SUBCASE("probabilities must sum to one") {
        FiniteProbSpace bad{{Rat(1, 2), Rat(1, 4)}};
        BlockPartition blocks{{{0, 1}}};
        CHECK_THROWS_AS(mv_conditional_expectation(bad, blocks, RatVec{0, 0}),
                        StructuralError);
    }
    SUBCASE("blocks must partition the points") {
        BlockPartition overlap{{{0, 1}, {1, 2, 3}}};
        CHECK_THROWS_AS(mv_conditional_expectation(u.space, overlap, RatVec{0, 0, 0, 0}),
                        StructuralError);
    }
}

TEST_CASE("dropping null states yields a strong averaging operator") {
    auto h = fixtures::halfnull4();
    auto q = quotient_strong_operator(h.space, h.blocks);
    CHECK(q.kept == std::vector<int>{0, 1});
    CHECK(q.t.t == RatMat{{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}});
    CHECK(is_strong_commutative(q.t).strong);

    auto u = fixtures::uniform4();
    auto qu = quotient_strong_operator(u.space, u.blocks);
    CHECK(qu.kept == std::vector<int>{0, 1, 2, 3});
    RatMat want{{Rat(1, 2), Rat(1, 2), 0, 0},
                {Rat(1, 2), Rat(1, 2), 0, 0},
                {0, 0, Rat(1, 2), Rat(1, 2)},
                {0, 0, Rat(1, 2), Rat(1, 2)}};
    CHECK(qu.t.t == want);
    CHECK(is_strong_commutative(qu.t).strong);
    // averaging is strong yet not Jordan: the class rows are spread out
    CHECK_FALSE(jordan_support_characterization(qu.t).jordan);
}

TEST_CASE("strong operators induce exact conditional expectations") {
    auto rep = mv_ce_from_strong_operator(fixtures::collapse2(),
                                          RatVec{Rat(1, 4), Rat(3, 4)});
    CHECK(rep.ok);
    CHECK(rep.weights == RatVec{1, 0});
    CHECK_FALSE(rep.crisp.empty());

    // a non-strong operator is refused outright
    CHECK_THROWS_AS(
        mv_ce_from_strong_operator(fixtures::straddle3(), RatVec{Rat(1, 3), Rat(1, 3), Rat(1, 3)}),
        PreconditionError);
}

TEST_CASE("random idempotents analyze cleanly at several sizes") {
    Rng rng(991);
    for (int t = 0; t < 20; ++t) {
        int n = 2 + static_cast<int>(rng() % 7);
        auto m = random_idempotent_stochastic(n, rng);
        auto rs = analyze_idempotent(m);
        REQUIRE_FALSE(rs.classes.empty());
        // rows reconstruct as mixtures of the class rows; float-seeded
        // samples are idempotent only to working precision, so compare there
        for (int i = 0; i < m.n(); ++i) {
            RatVec row(m.n(), 0);
            for (size_t k = 0; k < rs.pi.size(); ++k)
                for (int j = 0; j < m.n(); ++j) row[j] += rs.alpha[i][k] * rs.pi[k][j];
            for (int j = 0; j < m.n(); ++j)
                CHECK(std::abs(Rat(row[j] - m.t[i][j]).get_d()) <= 1e-9);
        }
        auto ki = kernel_ideals(m);
        CHECK(ki.verified);
    }
}
