#include "effalg/mv_algebra.hpp"

#include <algorithm>

#include "effalg/errors.hpp"

namespace effalg {

void check_structure(const MvAlgebra& m) {
    if (m.n < 1) throw StructuralError("algebra needs at least one element");
    if (m.zero < 0 || m.zero >= m.n) throw StructuralError("zero index out of range");
    if ((int)m.boxplus.size() != m.n) throw StructuralError("boxplus must have n rows");
    for (int a = 0; a < m.n; ++a) {
        if ((int)m.boxplus[a].size() != m.n)
            throw StructuralError("boxplus row " + std::to_string(a) + " has wrong length");
        for (int b = 0; b < m.n; ++b)
            if (m.boxplus[a][b] < 0 || m.boxplus[a][b] >= m.n)
                throw StructuralError("boxplus entry out of range");
    }
    if ((int)m.neg.size() != m.n) throw StructuralError("neg must have n entries");
    for (int a = 0; a < m.n; ++a)
        if (m.neg[a] < 0 || m.neg[a] >= m.n) throw StructuralError("neg entry out of range");
}

ValidationReport validate_mv(const MvAlgebra& m) {
    check_structure(m);
    ValidationReport rep;
    const int n = m.n;
    const auto& bp = m.boxplus;
    const int one = m.one();

    for (int x = 0; x < n; ++x) {
        if (bp[x][m.zero] != x) rep.fail("MV1", {x, m.zero}, "0 not neutral");
        for (int y = x; y < n; ++y)
            if (bp[x][y] != bp[y][x]) rep.fail("MV1", {x, y}, "not commutative");
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (bp[bp[x][y]][z] != bp[x][bp[y][z]])
                    rep.fail("MV1", {x, y, z}, "not associative");
    for (int x = 0; x < n; ++x)
        if (m.neg[m.neg[x]] != x) rep.fail("MV2", {x}, "neg not involutive");
    for (int x = 0; x < n; ++x)
        if (bp[x][one] != one) rep.fail("MV3", {x});
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (bp[x][m.neg[bp[x][m.neg[y]]]] != bp[y][m.neg[bp[y][m.neg[x]]]])
                rep.fail("MV4", {x, y});
    return rep;
}

MvDerivedOps derived_ops(const MvAlgebra& m) {
    const int n = m.n;
    MvDerivedOps d;
    d.boxdot.assign(n, std::vector<int>(n));
    d.vee.assign(n, std::vector<int>(n));
    d.wedge.assign(n, std::vector<int>(n));
    d.boxminus.assign(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            d.boxdot[x][y] = m.neg[m.boxplus[m.neg[x]][m.neg[y]]];
            d.vee[x][y] = m.boxplus[m.neg[m.boxplus[m.neg[x]][y]]][y];
            d.boxminus[x][y] = m.neg[m.boxplus[m.neg[x]][y]];
        }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            d.wedge[x][y] = m.neg[d.vee[m.neg[x]][m.neg[y]]];
    return d;
}

FiniteEffectAlgebra mv_to_effect_algebra(const MvAlgebra& m) {
    ValidationReport rep = validate_mv(m);
    if (!rep.valid) throw PreconditionError("partialization requires a valid MV-algebra");
    MvDerivedOps d = derived_ops(m);
    FiniteEffectAlgebra e;
    e.n = m.n;
    e.zero = m.zero;
    e.one = m.one();
    e.sum.assign(m.n, std::vector<int>(m.n, kUndef));
    for (int a = 0; a < m.n; ++a)
        for (int b = 0; b < m.n; ++b)
            if (d.boxdot[a][b] == m.zero) e.sum[a][b] = m.boxplus[a][b];
    ValidationReport check = validate_effect_algebra(e);
    if (!check.valid)
        throw ConsistencyError("partialization of a valid MV-algebra failed axiom validation");
    return e;
}

MvAlgebra effect_algebra_to_mv(const FiniteEffectAlgebra& e) {
    AlgebraClass cls = classify(e);
    if (!cls.is_mv_effect_algebra)
        throw PreconditionError("totalization requires a lattice algebra with the "
                                "disjointness property");
    DerivedOrder ord = derive_order(e);
    MvAlgebra m;
    m.n = e.n;
    m.zero = e.zero;
    m.neg = ord.perp;
    m.boxplus.assign(e.n, std::vector<int>(e.n, -1));
    for (int a = 0; a < e.n; ++a)
        for (int b = 0; b < e.n; ++b) {
            int cap = *meet(ord, ord.perp[a], b);
            int v = e.sum[a][cap]; // cap <= a', so defined
            if (v == kUndef)
                throw ConsistencyError("a + (a' ^ b) undefined in totalization");
            m.boxplus[a][b] = v;
        }
    ValidationReport check = validate_mv(m);
    if (!check.valid)
        throw ConsistencyError("totalization failed MV identity validation");
    return m;
}

std::vector<int> boolean_skeleton(const MvAlgebra& m) {
    std::vector<int> out;
    for (int x = 0; x < m.n; ++x)
        if (m.boxplus[x][x] == x) out.push_back(x);
    std::sort(out.begin(), out.end());
    return out;
}

int symmetric_difference(const MvAlgebra& m, int a, int b) {
    if (a < 0 || a >= m.n || b < 0 || b >= m.n)
        throw StructuralError("element index out of range");
    MvDerivedOps d = derived_ops(m);
    return d.boxminus[d.vee[a][b]][d.wedge[a][b]];
}

bool is_boolean_subalgebra(const MvAlgebra& m, const std::vector<int>& subset) {
    std::vector<bool> in(m.n, false);
    for (int x : subset) {
        if (x < 0 || x >= m.n) throw StructuralError("subset element out of range");
        in[x] = true;
    }
    if (!in[m.zero] || !in[m.one()]) return false;
    MvDerivedOps d = derived_ops(m);
    for (int a : subset)
        for (int b : subset)
            if (!in[m.boxplus[a][b]] || !in[m.neg[a]] || m.boxplus[a][a] != a)
                return false;
    for (int a : subset)
        for (int b : subset)
            for (int c : subset)
                if (d.wedge[a][d.vee[b][c]] != d.vee[d.wedge[a][b]][d.wedge[a][c]])
                    return false;
    return true;
}

}  // namespace effalg
