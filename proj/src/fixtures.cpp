#include "effalg/fixtures.hpp"

namespace effalg {
namespace fixtures {

namespace {

constexpr int X = kUndef;

FiniteEffectAlgebra make_ea(int n, int zero, int one, std::vector<std::vector<int>> sum) {
    FiniteEffectAlgebra e;
    e.n = n;
    e.zero = zero;
    e.one = one;
    e.sum = std::move(sum);
    return e;
}

} // namespace

FiniteEffectAlgebra chain2() {
    return make_ea(2, 0, 1, {{0, 1}, {1, X}});
}

FiniteEffectAlgebra chain3() {
    // 0, u, 1 with u + u = 1.
    return make_ea(3, 0, 2, {{0, 1, 2}, {1, 2, X}, {2, X, X}});
}

FiniteEffectAlgebra diamond() {
    // 0, a, b, 1 with a + b = 1 and no doubling.
    return make_ea(4, 0, 3,
                   {{0, 1, 2, 3}, {1, X, 3, X}, {2, 3, X, X}, {3, X, X, X}});
}

FiniteEffectAlgebra mo2() {
    // 0, a, a', b, b', 1: only 0-sums and the two complement pairs.
    return make_ea(6, 0, 5,
                   {{0, 1, 2, 3, 4, 5},
                    {1, X, 5, X, X, X},
                    {2, 5, X, X, X, X},
                    {3, X, X, X, 5, X},
                    {4, X, X, 5, X, X},
                    {5, X, X, X, X, X}});
}

MvAlgebra luk3() {
    MvAlgebra m;
    m.n = 3;
    m.zero = 0;
    m.neg = {2, 1, 0};
    m.boxplus = {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}};
    return m;
}

MvAlgebra luk3_squared() {
    MvAlgebra base = luk3();
    MvAlgebra m;
    m.n = 9;
    m.zero = 0;
    m.neg.assign(9, 0);
    m.boxplus.assign(9, std::vector<int>(9, 0));
    auto idx = [](int i, int j) { return 3 * i + j; };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            m.neg[idx(i, j)] = idx(base.neg[i], base.neg[j]);
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    m.boxplus[idx(i, j)][idx(k, l)] =
                        idx(base.boxplus[i][k], base.boxplus[j][l]);
        }
    return m;
}

FiniteEffectAlgebra luk3_ea() { return mv_to_effect_algebra(luk3()); }

FiniteEffectAlgebra luk3_squared_ea() { return mv_to_effect_algebra(luk3_squared()); }

std::vector<int> luk3_squared_first_coordinate() {
    std::vector<int> tau(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) tau[3 * i + j] = 3 * i + i;
    return tau;
}

std::vector<std::pair<std::string, FiniteEffectAlgebra>> all_effect_algebras() {
    return {{"chain2", chain2()},
            {"chain3", chain3()},
            {"diamond", diamond()},
            {"mo2", mo2()},
            {"luk3", luk3_ea()},
            {"luk3_squared", luk3_squared_ea()}};
}

std::vector<std::pair<std::string, MvAlgebra>> all_mv_algebras() {
    return {{"luk3", luk3()}, {"luk3_squared", luk3_squared()}};
}

std::vector<CMat> pinching2() {
    CMat p0 = CMat::Zero(2, 2), p1 = CMat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    return {p0, p1};
}

std::vector<CMat> pinching3() {
    CMat p0 = CMat::Zero(3, 3), p1 = CMat::Zero(3, 3);
    p0(0, 0) = 1;
    p0(1, 1) = 1;
    p1(2, 2) = 1;
    return {p0, p1};
}

StochasticMatrix collapse2() {
    StochasticMatrix t;
    t.t = {{Rat(1), Rat(0)}, {Rat(1), Rat(0)}};
    return t;
}

StochasticMatrix straddle3() {
    StochasticMatrix t;
    t.t = {{Rat(1), Rat(0), Rat(0)},
           {Rat(0), Rat(1), Rat(0)},
           {Rat(1, 2), Rat(1, 2), Rat(0)}};
    return t;
}

ProbFixture uniform4() {
    ProbFixture f;
    f.space.p = {Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)};
    f.blocks.blocks = {{0, 1}, {2, 3}};
    return f;
}

ProbFixture halfnull4() {
    ProbFixture f;
    f.space.p = {Rat(1, 2), Rat(1, 2), Rat(0), Rat(0)};
    f.blocks.blocks = {{0, 1}, {2, 3}};
    return f;
}

}  // namespace fixtures
}  // namespace effalg
