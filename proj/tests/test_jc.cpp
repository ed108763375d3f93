#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "effalg/errors.hpp"
#include "effalg/fixtures.hpp"
#include "effalg/hermitian.hpp"
#include "effalg/jc_state_ops.hpp"
#include "effalg/suite.hpp"

using namespace effalg;

namespace {

bool near(const CMat& a, const CMat& b, double eps = 1e-9) {
    return opnorm(a - b) <= eps;
}

CMat offdiag2() {
    CMat a(2, 2);
    a << 0.5, 0.3, 0.3, 0.5;
    return a;
}

HermitianMap corner_map() {
    // x -> <0|x|0> I, the d = 2 compression onto the first basis state
    return HermitianMap::from_function(2, [](const CMat& x) -> CMat {
        return x(0, 0).real() * CMat::Identity(2, 2);
    });
}

}  // namespace

TEST_CASE("Hermitian basis is orthonormal and coords round-trip") {
    const auto& b = basis_for(3);
    REQUIRE(b.dim() == 9);
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) {
            double ip = (b.element(i) * b.element(j)).trace().real();
            CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
        CMat a = random_hermitian(3, rng);
        CHECK(near(b.matrix(b.coords(a)), a, 1e-12));
    }
}

TEST_CASE("seeded generators produce what they claim") {
    Rng rng(11);
    for (int t = 0; t < 5; ++t) {
        CHECK(is_effect(random_effect(3, rng), 1e-12));
        CMat rho = random_psd(3, rng);
        CHECK(min_eig(rho) >= -1e-12);
        CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(validate_pvm(random_pvm(4, rng)).valid);
        CMat u = random_unitary(3, rng);
        CHECK(near(u * u.adjoint(), CMat::Identity(3, 3), 1e-10));
    }
}

TEST_CASE("PVM validation accepts the fixtures and rejects near misses") {
    CHECK(validate_pvm(fixtures::pinching2()).valid);
    CHECK(validate_pvm(fixtures::pinching3()).valid);

    auto p2 = fixtures::pinching2();
    SUBCASE("repeated projection breaks completeness") {
        std::vector<CMat> bad = {p2[0], p2[0]};
        CHECK_FALSE(validate_pvm(bad).valid);
    }
    SUBCASE("halves of the identity are not projections") {
        std::vector<CMat> bad = {0.5 * CMat::Identity(2, 2), 0.5 * CMat::Identity(2, 2)};
        CHECK_FALSE(validate_pvm(bad).valid);
    }
    SUBCASE("non-Hermitian entry is rejected") {
        CMat nh(2, 2);
        nh << 1.0, 0.5, 0.0, 0.0;
        std::vector<CMat> bad = {nh, CMat::Identity(2, 2) - nh};
        CHECK_FALSE(validate_pvm(bad).valid);
    }
}

TEST_CASE("pinching onto the diagonal kills off-diagonal terms") {
    auto m = pinching_map(fixtures::pinching2());
    CMat a = offdiag2();
    CMat image = m.apply(a);
    CMat want(2, 2);
    want << 0.5, 0.0, 0.0, 0.5;
    CHECK(near(image, want, 1e-12));

    // in basis order (diagonals, symmetric, antisymmetric) the action is a
    // projection onto the first two coordinates
    RMat expect = RMat::Zero(4, 4);
    expect(0, 0) = expect(1, 1) = 1.0;
    CHECK(opnorm_real(m.action - expect) <= 1e-12);

    auto rep = check_state_operator(m);
    CHECK(rep.unital);
    CHECK(rep.positive);
    CHECK(rep.idempotent);
    CHECK(rep.ok);
}

TEST_CASE("two-sided square inequality at the off-diagonal effect") {
    auto m = pinching_map(fixtures::pinching2());
    auto gaps = square_inequality_gaps(m, offdiag2());
    // m(a)^2 = (1/4) I exactly, so the inner gap closes; the outer one is
    // 0.34 - 0.25 = 0.09
    CHECK(std::abs(gaps.lhs_gap) <= 1e-9);
    CHECK(gaps.rhs_gap == doctest::Approx(0.09).epsilon(1e-9));
}

TEST_CASE("square inequality holds across a seeded random family") {
    Rng rng(101);
    for (int t = 0; t < 50; ++t) {
        int d = 2 + static_cast<int>(rng() % 3);
        auto m = pinching_map(random_pvm(d, rng));
        auto gaps = square_inequality_gaps(m, random_effect(d, rng));
        CHECK(gaps.lhs_gap >= -1e-9);
        CHECK(gaps.rhs_gap >= -1e-9);
    }
}

TEST_CASE("rank-mixed pinching in dimension 3 is a state operator") {
    auto m = pinching_map(fixtures::pinching3());
    auto rep = check_state_operator(m);
    CHECK(rep.ok);
    CHECK(rep.unital_err <= 1e-10);
    CHECK(rep.idem_err <= 1e-10);
    CHECK(rep.min_psd_eig >= -1e-10);
}

TEST_CASE("pinching is a conditional expectation but not Jordan multiplicative") {
    auto m = pinching_map(fixtures::pinching3());
    auto ce = is_conditional_expectation(m);
    CHECK(ce.is_ce);
    CHECK(ce.basis_residual <= 1e-9);
    CHECK(ce.sampled_residual <= 1e-9);

    auto jr = is_jordan_state_operator(m);
    CHECK_FALSE(jr.is_jordan);
    REQUIRE(jr.witness.has_value());
    const CMat& w = *jr.witness;
    CMat lhs = m.apply(w * w);
    CMat rhs = m.apply(m.apply(w) * m.apply(w));
    CHECK(opnorm(lhs - rhs) > 1e-6);
}

TEST_CASE("corner compression: conditional expectation, not Jordan") {
    auto m = corner_map();
    // frozen superoperator matrix: only the first diagonal coordinate feeds
    // both diagonal outputs
    RMat expect = RMat::Zero(4, 4);
    expect(0, 0) = expect(1, 0) = 1.0;
    CHECK(opnorm_real(m.action - expect) <= 1e-12);

    CHECK(check_state_operator(m).ok);

    auto ce = is_conditional_expectation(m);
    CHECK(ce.is_ce);

    auto jr = is_jordan_state_operator(m);
    CHECK_FALSE(jr.is_jordan);
    REQUIRE(jr.witness.has_value());
    const CMat& w = *jr.witness;
    CHECK(opnorm(m.apply(w * w) - m.apply(m.apply(w) * m.apply(w))) > 1e-6);

    // restricted to the diagonal span it is Jordan multiplicative
    CMat e00 = CMat::Zero(2, 2), e11 = CMat::Zero(2, 2);
    e00(0, 0) = 1.0;
    e11(1, 1) = 1.0;
    auto restricted = is_jordan_state_operator(m, {}, {e00, e11});
    CHECK(restricted.is_jordan);
}

TEST_CASE("support of the corner compression is the first basis projection") {
    auto m = corner_map();
    CMat e = support_projection(m);
    CMat e00 = CMat::Zero(2, 2);
    e00(0, 0) = 1.0;
    CHECK(near(e, e00, 1e-8));

    auto c = compress_to_support(m, e);
    REQUIRE(c.d == 1);
    // the compressed map on the 1x1 corner is the identity
    CHECK(opnorm_real(c.action - RMat::Identity(1, 1)) <= 1e-9);
}

TEST_CASE("decomposition of the corner map factors through diagonal pinching") {
    auto m = corner_map();
    auto dec = decompose_state_operator(m);
    CMat e00 = CMat::Zero(2, 2);
    e00(0, 0) = 1.0;
    CHECK(near(dec.support, e00, 1e-8));

    auto pinch = pinching_map(fixtures::pinching2());
    CHECK(opnorm_real(dec.mu.action - pinch.action) <= 1e-8);
    CHECK(opnorm_real(dec.phi.compose(dec.mu).action - m.action) <= 1e-8);
    CHECK(dec.multiplicative_domain.size() == 2);

    // mu itself is a faithful conditional expectation
    CHECK(is_conditional_expectation(dec.mu).is_ce);

    // every basis member of the domain satisfies the averaged square law
    for (const CMat& a : dec.multiplicative_domain)
        CHECK(opnorm(m.apply(a * a) - m.apply(m.apply(a) * m.apply(a))) <= 1e-8);
}

TEST_CASE("pointwise multiplicativity clauses agree at fixed inputs") {
    auto pinch = pinching_map(fixtures::pinching2());

    SUBCASE("off-diagonal input: all three clauses fail together") {
        auto rep = equivalence_lemma_check(pinch, offdiag2());
        CHECK(rep.agree);
        CHECK_FALSE(rep.square);
        CHECK_FALSE(rep.jordan);
        CHECK_FALSE(rep.triple);
    }
    SUBCASE("diagonal input: all three clauses hold together") {
        CMat a(2, 2);
        a << 0.5, 0.0, 0.0, 0.25;
        auto rep = equivalence_lemma_check(pinch, a);
        CHECK(rep.agree);
        CHECK(rep.square);
        CHECK(rep.jordan);
        CHECK(rep.triple);
    }
}

TEST_CASE("averaged multiplicativity clauses agree at fixed inputs") {
    auto m = corner_map();
    SUBCASE("corner map at the off-diagonal effect: all false") {
        auto rep = second_lemma_check(m, offdiag2());
        CHECK(rep.agree);
        CHECK_FALSE(rep.square);
        CHECK_FALSE(rep.jordan);
        CHECK_FALSE(rep.triple);
    }
    SUBCASE("corner map at the identity: all true") {
        auto rep = second_lemma_check(m, CMat::Identity(2, 2));
        CHECK(rep.agree);
        CHECK(rep.square);
        CHECK(rep.jordan);
        CHECK(rep.triple);
    }
    SUBCASE("3-dimensional pinching at a block-diagonal input: all true") {
        auto pinch = pinching_map(fixtures::pinching3());
        CMat a(3, 3);
        a << 0.5, 0.2, 0.0,
             0.2, 0.6, 0.0,
             0.0, 0.0, 0.25;
        auto rep = second_lemma_check(pinch, a);
        CHECK(rep.agree);
        CHECK(rep.square);
        CHECK(rep.jordan);
        CHECK(rep.triple);
    }
    SUBCASE("3-dimensional pinching at a cross-block input: all false") {
        auto pinch = pinching_map(fixtures::pinching3());
        CMat a = CMat::Zero(3, 3);
        a(0, 2) = a(2, 0) = 0.5;
        auto rep = second_lemma_check(pinch, a);
        CHECK(rep.agree);
        CHECK_FALSE(rep.square);
    }
}

TEST_CASE("effect-level assignments extend to the linear maps they determine") {
    auto lin = extend_to_linear(2, [](const CMat& x) -> CMat {
        CMat out = CMat::Zero(2, 2);
        out(0, 0) = x(0, 0).real();
        out(1, 1) = x(1, 1).real();
        return out;
    });
    auto pinch = pinching_map(fixtures::pinching2());
    CHECK(opnorm_real(lin.action - pinch.action) <= 1e-9);
}

TEST_CASE("extension rejects non-additive effect assignments") {
    // x -> x^2 on effects is neither additive nor linearizable
    CHECK_THROWS_AS(extend_to_linear(2,
                                     [](const CMat& x) -> CMat { return x * x; }),
                    PreconditionError);
}

TEST_CASE("random block operators verify end to end") {
    Rng rng(2026);
    for (int t = 0; t < 10; ++t) {
        CMat support;
        auto m = random_block_state_operator(3, rng, &support);
        CHECK(check_state_operator(m).ok);
        CMat e = support_projection(m);
        CHECK(near(e, support, 1e-7));
        auto dec = decompose_state_operator(m);
        CHECK(opnorm_real(dec.phi.compose(dec.mu).action - m.action) <= 1e-7);
    }
}
