#include "effalg/effect_algebra.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "effalg/errors.hpp"

namespace effalg {

void check_structure(const FiniteEffectAlgebra& e) {
    if (e.n < 1) throw StructuralError("algebra needs at least one element");
    if (e.zero < 0 || e.zero >= e.n) throw StructuralError("zero index out of range");
    if (e.one < 0 || e.one >= e.n) throw StructuralError("one index out of range");
    if ((int)e.sum.size() != e.n) throw StructuralError("sum table must have n rows");
    for (int a = 0; a < e.n; ++a) {
        if ((int)e.sum[a].size() != e.n)
            throw StructuralError("sum table row " + std::to_string(a) + " has wrong length");
        for (int b = 0; b < e.n; ++b) {
            int v = e.sum[a][b];
            if (v != kUndef && (v < 0 || v >= e.n))
                throw StructuralError("sum[" + std::to_string(a) + "][" + std::to_string(b) +
                                      "] out of range");
        }
    }
}

ValidationReport validate_effect_algebra(const FiniteEffectAlgebra& e) {
    check_structure(e);
    ValidationReport rep;
    const int n = e.n;

    // EA1: a+b defined iff b+a defined, and the values agree.
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            if (e.sum[a][b] != e.sum[b][a]) rep.fail("EA1", {a, b});

    // EA2: if a+b and (a+b)+c are defined then b+c and a+(b+c) are defined
    // and the two bracketings agree. All ordered triples.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!e.defined(a, b)) continue;
            int ab = e.plus(a, b);
            for (int c = 0; c < n; ++c) {
                if (!e.defined(ab, c)) continue;
                if (!e.defined(b, c) || !e.defined(a, e.plus(b, c)) ||
                    e.plus(ab, c) != e.plus(a, e.plus(b, c)))
                    rep.fail("EA2", {a, b, c});
            }
        }

    // EA3: for each a exactly one x with a+x = 1.
    for (int a = 0; a < n; ++a) {
        std::vector<int> sup;
        for (int x = 0; x < n; ++x)
            if (e.defined(a, x) && e.plus(a, x) == e.one) sup.push_back(x);
        if (sup.size() != 1) {
            std::vector<int> w{a};
            w.insert(w.end(), sup.begin(), sup.end());
            rep.fail("EA3", w,
                     sup.empty() ? "no orthosupplement" : "orthosupplement not unique");
        }
    }

    // EA4: a+1 defined forces a = 0.
    for (int a = 0; a < n; ++a)
        if (a != e.zero && e.defined(a, e.one)) rep.fail("EA4", {a, e.one});

    return rep;
}

DerivedOrder derive_order(const FiniteEffectAlgebra& e) {
    const int n = e.n;
    DerivedOrder ord;
    ord.leq.assign(n, std::vector<bool>(n, false));
    ord.perp.assign(n, kUndef);
    ord.minus.assign(n, std::vector<int>(n, kUndef));

    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            if (e.defined(a, c)) {
                int b = e.plus(a, c);
                ord.leq[a][b] = true;
                ord.minus[b][a] = c; // unique by cancellation in a valid algebra
                if (b == e.one) ord.perp[a] = c;
            }
    return ord;
}

namespace {

std::optional<int> bound_of(const DerivedOrder& ord, int a, int b, bool lower) {
    const int n = (int)ord.perp.size();
    std::vector<int> cand;
    for (int x = 0; x < n; ++x) {
        bool ok = lower ? (ord.leq[x][a] && ord.leq[x][b]) : (ord.leq[a][x] && ord.leq[b][x]);
        if (ok) cand.push_back(x);
    }
    for (int m : cand) {
        bool extreme = true;
        for (int x : cand)
            if (lower ? !ord.leq[x][m] : !ord.leq[m][x]) { extreme = false; break; }
        if (extreme) return m;
    }
    return std::nullopt;
}

} // namespace

std::optional<int> meet(const DerivedOrder& ord, int a, int b) {
    return bound_of(ord, a, b, true);
}

std::optional<int> join(const DerivedOrder& ord, int a, int b) {
    return bound_of(ord, a, b, false);
}

AlgebraClass classify(const FiniteEffectAlgebra& e) {
    DerivedOrder ord = derive_order(e);
    const int n = e.n;
    AlgebraClass c;
    c.is_lattice = true;
    for (int a = 0; a < n && c.is_lattice; ++a)
        for (int b = a; b < n && c.is_lattice; ++b)
            if (!meet(ord, a, b) || !join(ord, a, b)) c.is_lattice = false;
    if (!c.is_lattice) return c;

    c.is_orthomodular = true;
    c.is_mv_effect_algebra = true;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int m = *meet(ord, a, b);
            bool orth = ord.leq[a][ord.perp[b]];
            if (orth && m != e.zero) c.is_orthomodular = false;
            if (m == e.zero && !orth) c.is_mv_effect_algebra = false;
        }
    return c;
}

bool is_ideal(const FiniteEffectAlgebra& e, const std::vector<int>& subset) {
    std::vector<bool> in(e.n, false);
    for (int x : subset) {
        if (x < 0 || x >= e.n) throw StructuralError("ideal element out of range");
        in[x] = true;
    }
    if (subset.empty()) return false;
    DerivedOrder ord = derive_order(e);
    for (int a = 0; a < e.n; ++a)
        if (in[a])
            for (int b = 0; b < e.n; ++b) {
                if (ord.leq[b][a] && !in[b]) return false;
                if (in[b] && e.defined(a, b) && !in[e.plus(a, b)]) return false;
            }
    return true;
}

QuotientResult quotient_mv(const FiniteEffectAlgebra& e, const std::vector<int>& ideal) {
    AlgebraClass cls = classify(e);
    if (!cls.is_mv_effect_algebra)
        throw PreconditionError("quotient requires a lattice algebra with the disjointness "
                                "property (MV-effect algebra)");
    if (!is_ideal(e, ideal)) throw PreconditionError("quotient requires an ideal");

    const int n = e.n;
    DerivedOrder ord = derive_order(e);
    std::vector<bool> in_ideal(n, false);
    for (int x : ideal) in_ideal[x] = true;

    // a ~ b iff the symmetric difference (a v b) - (a ^ b) lies in the ideal.
    auto related = [&](int a, int b) {
        int j = *join(ord, a, b);
        int m = *meet(ord, a, b);
        int d = ord.minus[j][m];
        if (d == kUndef) throw ConsistencyError("join minus meet undefined in lattice algebra");
        return in_ideal[d];
    };

    // Union-find over the relation; transitivity holds for ideal congruences,
    // the closure makes the construction total either way.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (related(a, b)) parent[find(a)] = find(b);

    // Sanity: the union-find classes must coincide with the relation itself.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if ((find(a) == find(b)) != related(a, b))
                throw ConsistencyError("congruence classes disagree with the relation; "
                                       "the subset is not a congruence kernel");

    std::vector<int> rep_of_root(n, -1), class_of(n, -1);
    std::vector<int> representative;
    for (int a = 0; a < n; ++a) {
        int r = find(a);
        if (rep_of_root[r] < 0) {
            rep_of_root[r] = (int)representative.size();
            representative.push_back(a); // least index first, scan order
        }
        class_of[a] = rep_of_root[r];
    }
    const int q = (int)representative.size();

    FiniteEffectAlgebra out;
    out.n = q;
    out.zero = class_of[e.zero];
    out.one = class_of[e.one];
    out.sum.assign(q, std::vector<int>(q, kUndef));

    // [a]+[b] defined iff some a1 ~ a, b1 ~ b have a1+b1 defined; all defined
    // pairs must land in one class.
    for (int ca = 0; ca < q; ++ca)
        for (int cb = 0; cb < q; ++cb) {
            int result = kUndef;
            for (int a = 0; a < n; ++a) {
                if (class_of[a] != ca) continue;
                for (int b = 0; b < n; ++b) {
                    if (class_of[b] != cb || !e.defined(a, b)) continue;
                    int c = class_of[e.plus(a, b)];
                    if (result == kUndef) result = c;
                    else if (result != c)
                        throw ConsistencyError("quotient sum not well defined on classes");
                }
            }
            out.sum[ca][cb] = result;
        }

    ValidationReport check = validate_effect_algebra(out);
    if (!check.valid) throw ConsistencyError("quotient table failed axiom validation");
    return {out, class_of, representative};
}

bool is_state(const FiniteEffectAlgebra& e, const StateVector& s) {
    if ((int)s.values.size() != e.n) return false;
    const Rat zero(0), one(1);
    for (const Rat& v : s.values)
        if (v < zero || v > one) return false;
    if (s.values[e.zero] != zero || s.values[e.one] != one) return false;
    for (int a = 0; a < e.n; ++a)
        for (int b = 0; b < e.n; ++b)
            if (e.defined(a, b) &&
                s.values[a] + s.values[b] != s.values[e.plus(a, b)])
                return false;
    return true;
}

namespace {

// Exact affine solution set of the state equations: x = base + null * t.
struct AffineSolution {
    bool consistent = false;
    RatVec base;                 // length n
    std::vector<RatVec> null;    // k basis vectors, each length n
};

AffineSolution solve_state_equations(const FiniteEffectAlgebra& e) {
    const int n = e.n;
    RatMat rows; // [coefs | rhs]
    auto add_row = [&](RatVec coef, Rat rhs) {
        coef.push_back(std::move(rhs));
        rows.push_back(std::move(coef));
    };
    {
        RatVec r(n, Rat(0));
        r[e.zero] = 1;
        add_row(r, Rat(0));
    }
    {
        RatVec r(n, Rat(0));
        r[e.one] = 1;
        add_row(r, Rat(1));
    }
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            if (e.defined(a, b)) {
                RatVec r(n, Rat(0));
                r[a] += 1;
                r[b] += 1;
                r[e.plus(a, b)] -= 1;
                bool trivial = true;
                for (const Rat& v : r)
                    if (v != 0) { trivial = false; break; }
                if (!trivial) add_row(r, Rat(0));
            }

    rref(rows, n);

    AffineSolution sol;
    std::vector<int> pivot_col;
    std::vector<bool> is_pivot(n, false);
    for (const auto& row : rows) {
        int p = -1;
        for (int j = 0; j < n; ++j)
            if (row[j] != 0) { p = j; break; }
        if (p < 0) {
            if (row[n] != 0) return sol; // 0 = nonzero: no states
            continue;
        }
        pivot_col.push_back(p);
        is_pivot[p] = true;
    }

    sol.consistent = true;
    sol.base.assign(n, Rat(0));
    // Free variables set to 0 in the particular solution.
    for (const auto& row : rows) {
        int p = -1;
        for (int j = 0; j < n; ++j)
            if (row[j] != 0) { p = j; break; }
        if (p < 0) continue;
        sol.base[p] = row[n]; // rref: pivot is 1, free vars contribute 0
    }
    for (int j = 0; j < n; ++j) {
        if (is_pivot[j]) continue;
        RatVec dir(n, Rat(0));
        dir[j] = 1;
        for (const auto& row : rows) {
            int p = -1;
            for (int c = 0; c < n; ++c)
                if (row[c] != 0) { p = c; break; }
            if (p < 0) continue;
            dir[p] = -row[j];
        }
        sol.null.push_back(std::move(dir));
    }
    return sol;
}

} // namespace

StatePolytope state_space(const FiniteEffectAlgebra& e) {
    check_structure(e);
    StatePolytope poly;
    AffineSolution sol = solve_state_equations(e);
    if (!sol.consistent) return poly;

    const int n = e.n;
    const int k = (int)sol.null.size();

    // Inequalities g_r(t) = c_r . t + d_r >= 0 from 0 <= x_i <= 1.
    std::vector<RatVec> cs;
    RatVec ds;
    for (int i = 0; i < n; ++i) {
        RatVec ci(k);
        bool nonzero = false;
        for (int j = 0; j < k; ++j) {
            ci[j] = sol.null[j][i];
            if (ci[j] != 0) nonzero = true;
        }
        if (!nonzero) {
            if (sol.base[i] < 0 || sol.base[i] > 1) return poly; // infeasible constant
            continue;
        }
        RatVec neg(k);
        for (int j = 0; j < k; ++j) neg[j] = -ci[j];
        cs.push_back(ci);
        ds.push_back(sol.base[i]);          // x_i >= 0
        cs.push_back(neg);
        ds.push_back(Rat(1) - sol.base[i]); // x_i <= 1
    }

    auto point_to_state = [&](const RatVec& t) {
        StateVector s;
        s.values = sol.base;
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < n; ++i) s.values[i] += sol.null[j][i] * t[j];
        return s;
    };
    auto feasible = [&](const RatVec& t) {
        for (size_t r = 0; r < cs.size(); ++r) {
            Rat g = ds[r];
            for (int j = 0; j < k; ++j) g += cs[r][j] * t[j];
            if (g < 0) return false;
        }
        return true;
    };

    std::set<RatVec> seen;
    std::vector<StateVector> verts;
    auto push_vertex = [&](const RatVec& t) {
        StateVector s = point_to_state(t);
        RatVec key = s.values;
        if (seen.insert(key).second) verts.push_back(std::move(s));
    };

    if (k == 0) {
        RatVec t;
        if (feasible(t)) push_vertex(t);
    } else {
        // Every vertex is the unique solution of k active constraints.
        const int m = (int)cs.size();
        std::vector<int> idx(k);
        std::function<void(int, int)> combos = [&](int start, int depth) {
            if (depth == k) {
                RatMat a(k, RatVec(k));
                RatVec b(k);
                for (int r = 0; r < k; ++r) {
                    a[r] = cs[idx[r]];
                    b[r] = -ds[idx[r]];
                }
                RatVec t;
                if (solve_square(a, b, t) && feasible(t)) push_vertex(t);
                return;
            }
            for (int i = start; i <= m - (k - depth); ++i) {
                idx[depth] = i;
                combos(i + 1, depth + 1);
            }
        };
        combos(0, 0);
    }

    if (verts.empty()) return poly;
    poly.empty = false;
    std::sort(verts.begin(), verts.end(),
              [](const StateVector& a, const StateVector& b) { return a.values < b.values; });
    poly.vertices = std::move(verts);

    // Affine dimension: rank of differences from the first vertex.
    RatMat diffs;
    for (size_t i = 1; i < poly.vertices.size(); ++i) {
        RatVec d(n);
        for (int j = 0; j < n; ++j)
            d[j] = poly.vertices[i].values[j] - poly.vertices[0].values[j];
        diffs.push_back(std::move(d));
    }
    poly.dim = diffs.empty() ? 0 : rat_rank(diffs);
    return poly;
}

OrderingSetResult is_ordering_set(const FiniteEffectAlgebra& e,
                                  const std::vector<StateVector>& states) {
    for (const auto& s : states)
        if (!is_state(e, s)) throw PreconditionError("ordering-set member is not a state");
    DerivedOrder ord = derive_order(e);
    OrderingSetResult res;
    for (int a = 0; a < e.n; ++a)
        for (int b = 0; b < e.n; ++b) {
            if (ord.leq[a][b]) continue;
            bool dominated = true;
            for (const auto& s : states)
                if (s.values[a] > s.values[b]) { dominated = false; break; }
            if (dominated) {
                res.ordering = false;
                res.witness = {a, b};
                return res;
            }
        }
    res.ordering = true;
    return res;
}

}  // namespace effalg
