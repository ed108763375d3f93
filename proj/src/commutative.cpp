#include "effalg/commutative.hpp"

#include <algorithm>
#include <random>

#include "effalg/errors.hpp"

namespace effalg {

namespace {

bool near(const Rat& a, const Rat& b, double eps) {
    if (eps == 0) return a == b;
    Rat d = a - b;
    return std::abs(d.get_d()) <= eps;
}

bool near_zero(const Rat& a, double eps) { return near(a, Rat(0), eps); }

RatVec row_apply(const RatMat& t, const RatVec& f) {
    const int n = (int)t.size();
    RatVec out(n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i] += t[i][j] * f[j];
    return out;
}

} // namespace

void check_structure(const StochasticMatrix& t) {
    const int n = t.n();
    if (n < 1) throw StructuralError("matrix needs at least one row");
    for (const auto& row : t.t)
        if ((int)row.size() != n) throw StructuralError("matrix must be square");
}

void check_structure(const FiniteProbSpace& sp, const BlockPartition* blocks) {
    const int n = (int)sp.p.size();
    if (n < 1) throw StructuralError("probability space needs at least one point");
    Rat total(0);
    for (const Rat& w : sp.p) {
        if (w < 0) throw StructuralError("negative probability weight");
        total += w;
    }
    if (total != 1) throw StructuralError("probability weights must sum to 1");
    if (!blocks) return;
    std::vector<int> seen(n, 0);
    for (const auto& b : blocks->blocks) {
        if (b.empty()) throw StructuralError("empty block");
        for (int x : b) {
            if (x < 0 || x >= n) throw StructuralError("block element out of range");
            if (seen[x]++) throw StructuralError("blocks must be disjoint");
        }
    }
    for (int x = 0; x < n; ++x)
        if (!seen[x]) throw StructuralError("blocks must cover every point");
}

ValidationReport validate_stochastic_idempotent(const StochasticMatrix& t, double eps) {
    check_structure(t);
    ValidationReport rep;
    const int n = t.n();
    for (int i = 0; i < n; ++i) {
        Rat row(0);
        for (int j = 0; j < n; ++j) {
            if (t.t[i][j] < 0 && !near_zero(t.t[i][j], eps))
                rep.fail("nonnegative", {i, j});
            row += t.t[i][j];
        }
        if (!near(row, Rat(1), eps)) rep.fail("row-sum", {i});
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat sq(0);
            for (int k = 0; k < n; ++k) sq += t.t[i][k] * t.t[k][j];
            if (!near(sq, t.t[i][j], eps)) rep.fail("idempotent", {i, j});
        }
    return rep;
}

RecurrentStructure analyze_idempotent(const StochasticMatrix& t, double eps) {
    const int n = t.n();
    RecurrentStructure st;
    std::vector<int> class_of(n, -1);

    for (int i = 0; i < n; ++i) {
        if (near_zero(t.t[i][i], eps) || t.t[i][i] < 0) continue;
        bool matched = false;
        for (size_t k = 0; k < st.classes.size() && !matched; ++k) {
            bool same = true;
            for (int j = 0; j < n; ++j)
                if (!near(t.t[i][j], st.pi[k][j], eps)) { same = false; break; }
            if (same) {
                st.classes[k].push_back(i);
                class_of[i] = (int)k;
                matched = true;
            }
        }
        if (!matched) {
            class_of[i] = (int)st.classes.size();
            st.classes.push_back({i});
            st.pi.push_back(t.t[i]);
        }
    }
    if (st.classes.empty())
        throw ConsistencyError("no recurrent state; matrix is not a stochastic idempotent");

    // Each class row must be supported inside its class.
    for (size_t k = 0; k < st.classes.size(); ++k)
        for (int j = 0; j < n; ++j)
            if (class_of[j] != (int)k && !near_zero(st.pi[k][j], eps))
                throw ConsistencyError("class row leaks outside its class");

    const int k = (int)st.classes.size();
    st.alpha.assign(n, RatVec(k, Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c)
            for (int j : st.classes[c]) st.alpha[i][c] += t.t[i][j];
        // Mixture identity: row_i = sum_c alpha[i][c] pi_c.
        for (int j = 0; j < n; ++j) {
            Rat mix(0);
            for (int c = 0; c < k; ++c) mix += st.alpha[i][c] * st.pi[c][j];
            if (!near(mix, t.t[i][j], std::max(eps, 1e-8)))
                throw ConsistencyError("row is not a mixture of class rows; matrix is "
                                       "not idempotent within tolerance");
        }
    }
    return st;
}

namespace {

// Exact span membership for the range of T, spanned by the class indicators
// v_c = T 1_{C_c}: at recurrent rows v_c is the class indicator, so a range
// element is determined by its class coefficients.
struct RangeView {
    const RecurrentStructure& st;
    int n;

    // v in range iff v = sum_c v(rep_c) v_c with v_c = alpha column c.
    bool contains(const RatVec& v, double eps) const {
        const int k = (int)st.classes.size();
        RatVec coef(k);
        for (int c = 0; c < k; ++c) coef[c] = v[st.classes[c][0]];
        for (int i = 0; i < n; ++i) {
            Rat expect(0);
            for (int c = 0; c < k; ++c) expect += coef[c] * st.alpha[i][c];
            if (!near(expect, v[i], eps)) return false;
        }
        return true;
    }
};

RatVec indicator(const std::vector<int>& set, int n) {
    RatVec v(n, Rat(0));
    for (int x : set) v[x] = 1;
    return v;
}

} // namespace

MinClosureResult is_strong_commutative(const StochasticMatrix& t, double eps,
                                       uint64_t seed) {
    ValidationReport rep = validate_stochastic_idempotent(t, std::max(eps, 1e-8));
    if (!rep.valid)
        throw PreconditionError("strongness test requires a stochastic idempotent");
    RecurrentStructure st = analyze_idempotent(t, eps);
    const int n = t.n();
    const int k = (int)st.classes.size();
    RangeView range{st, n};

    MinClosureResult res;
    res.strong = true;
    for (int a = 0; a < k && res.strong; ++a)
        for (int b = a + 1; b < k && res.strong; ++b) {
            RatVec va = row_apply(t.t, indicator(st.classes[a], n));
            RatVec vb = row_apply(t.t, indicator(st.classes[b], n));
            RatVec mn(n);
            for (int i = 0; i < n; ++i) mn[i] = std::min(va[i], vb[i]);
            if (!range.contains(mn, eps)) {
                res.strong = false;
                res.witness = {indicator(st.classes[a], n), indicator(st.classes[b], n)};
                res.min_image = mn;
                res.mapped = row_apply(t.t, mn);
            }
        }

    // Cross-check on seeded random pairs: for strong T the operator must fix
    // min(Tf, Tg); a failure on a non-strong T is expected and ignored here.
    {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> num(0, 8);
        auto rand_vec = [&]() {
            RatVec f(n);
            for (int i = 0; i < n; ++i) f[i] = Rat(num(rng)) / 8;
            return f;
        };
        for (int s = 0; s < 200; ++s) {
            RatVec tf = row_apply(t.t, rand_vec());
            RatVec tg = row_apply(t.t, rand_vec());
            RatVec mn(n);
            for (int i = 0; i < n; ++i) mn[i] = std::min(tf[i], tg[i]);
            RatVec tmn = row_apply(t.t, mn);
            bool fixed = true;
            for (int i = 0; i < n; ++i)
                if (!near(tmn[i], mn[i], std::max(eps, 1e-8))) { fixed = false; break; }
            if (res.strong && !fixed)
                throw ConsistencyError("class test says strong but a sampled minimum "
                                       "is not fixed");
        }
    }
    return res;
}

ProductClosureResult is_ce_commutative(const StochasticMatrix& t, double eps,
                                       uint64_t seed) {
    ValidationReport rep = validate_stochastic_idempotent(t, std::max(eps, 1e-8));
    if (!rep.valid)
        throw PreconditionError("conditional expectation test requires a stochastic "
                                "idempotent");
    RecurrentStructure st = analyze_idempotent(t, eps);
    const int n = t.n();
    const int k = (int)st.classes.size();
    RangeView range{st, n};

    ProductClosureResult res;
    res.ce = true;
    for (int a = 0; a < k && res.ce; ++a)
        for (int b = a; b < k && res.ce; ++b) {
            RatVec va = row_apply(t.t, indicator(st.classes[a], n));
            RatVec vb = row_apply(t.t, indicator(st.classes[b], n));
            RatVec prod(n);
            for (int i = 0; i < n; ++i) prod[i] = va[i] * vb[i];
            if (!range.contains(prod, eps)) {
                res.ce = false;
                res.witness = {indicator(st.classes[a], n), indicator(st.classes[b], n)};
            }
        }

    // Independent sampled check of T((Tf) g (Tf)) = (Tf)(Tg)(Tf).
    {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> num(0, 8);
        bool sampled_ok = true;
        for (int s = 0; s < 200 && sampled_ok; ++s) {
            RatVec f(n), g(n);
            for (int i = 0; i < n; ++i) {
                f[i] = Rat(num(rng)) / 8;
                g[i] = Rat(num(rng)) / 8;
            }
            RatVec tf = row_apply(t.t, f), tg = row_apply(t.t, g);
            RatVec inner(n);
            for (int i = 0; i < n; ++i) inner[i] = tf[i] * g[i] * tf[i];
            RatVec lhs = row_apply(t.t, inner);
            for (int i = 0; i < n; ++i)
                if (!near(lhs[i], tf[i] * tg[i] * tf[i], std::max(eps, 1e-8))) {
                    sampled_ok = false;
                    break;
                }
        }
        if (res.ce && !sampled_ok)
            throw ConsistencyError("class test says conditional expectation but sampled "
                                   "multiplicativity fails");
    }

    MinClosureResult strong = is_strong_commutative(t, eps, seed);
    if (strong.strong != res.ce)
        throw ConsistencyError("strongness and conditional expectation disagree on a "
                               "commutative idempotent");
    return res;
}

JordanCommutativeResult jordan_support_characterization(const StochasticMatrix& t,
                                                        double eps) {
    ValidationReport rep = validate_stochastic_idempotent(t, std::max(eps, 1e-8));
    if (!rep.valid)
        throw PreconditionError("characterization requires a stochastic idempotent");
    const int n = t.n();
    JordanCommutativeResult res;

    // Polarized Jordan test on coordinate pairs:
    // T(e_x e_y) = delta_xy col_x vs pointwise (T e_x)(T e_y).
    res.jordan = true;
    for (int x = 0; x < n && res.jordan; ++x)
        for (int y = x; y < n && res.jordan; ++y) {
            for (int i = 0; i < n; ++i) {
                Rat lhs = (x == y) ? t.t[i][x] : Rat(0);
                Rat mixed(0);
                for (int j = 0; j < n; ++j)
                    mixed += t.t[i][j] * t.t[j][x] * t.t[j][y];
                if (!near(lhs, mixed, std::max(eps, 1e-8))) {
                    res.jordan = false;
                    res.witness = {x, y};
                    break;
                }
            }
        }
    if (!res.jordan) return res;

    // Fixed points: rows equal to coordinate vectors.
    for (int x = 0; x < n; ++x) {
        bool fixed = near(t.t[x][x], Rat(1), eps);
        for (int j = 0; fixed && j < n; ++j)
            if (j != x && !near_zero(t.t[x][j], eps)) fixed = false;
        if (fixed) res.fixed_points.push_back(x);
    }

    // Tf = phi(f restricted to K): columns outside K must vanish.
    res.extension_ok = true;
    for (int j = 0; j < n; ++j) {
        if (std::binary_search(res.fixed_points.begin(), res.fixed_points.end(), j))
            continue;
        for (int i = 0; i < n; ++i)
            if (!near_zero(t.t[i][j], std::max(eps, 1e-8))) res.extension_ok = false;
    }
    const int k = (int)res.fixed_points.size();
    res.phi.assign(n, RatVec(k));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < k; ++c) res.phi[i][c] = t.t[i][res.fixed_points[c]];
    // phi is positive (entries >= 0 already checked) and unital; evaluation at
    // fixed points returns the restriction.
    for (int i = 0; i < n; ++i) {
        Rat row(0);
        for (int c = 0; c < k; ++c) row += res.phi[i][c];
        if (!near(row, Rat(1), std::max(eps, 1e-8))) res.extension_ok = false;
    }
    for (int c = 0; c < k; ++c)
        for (int c2 = 0; c2 < k; ++c2)
            if (!near(res.phi[res.fixed_points[c]][c2], Rat(c == c2 ? 1 : 0), eps))
                res.extension_ok = false;

    if (!res.extension_ok)
        throw ConsistencyError("point-mass classes but evaluation form failed; "
                               "matrix is not idempotent within tolerance");
    return res;
}

KernelIdealResult kernel_ideals(const StochasticMatrix& t, double eps) {
    ValidationReport rep = validate_stochastic_idempotent(t, std::max(eps, 1e-8));
    if (!rep.valid)
        throw PreconditionError("kernel characterization requires a stochastic idempotent");
    const int n = t.n();
    KernelIdealResult res;
    for (int i = 0; i < n; ++i)
        if (!near_zero(t.t[i][i], eps) && t.t[i][i] > 0) res.support.push_back(i);

    // T e_x = column x: zero iff x is not in the support.
    res.verified = true;
    for (int x = 0; x < n; ++x) {
        bool in_support =
            std::binary_search(res.support.begin(), res.support.end(), x);
        bool column_zero = true;
        for (int i = 0; i < n; ++i)
            if (!near_zero(t.t[i][x], eps)) { column_zero = false; break; }
        if (in_support == column_zero) res.verified = false;
    }
    if (!res.verified)
        throw ConsistencyError("support and kernel columns disagree; matrix is not "
                               "idempotent within tolerance");
    return res;
}

RatVec mv_conditional_expectation(const FiniteProbSpace& sp, const BlockPartition& blocks,
                                  const RatVec& a) {
    check_structure(sp, &blocks);
    const int n = (int)sp.p.size();
    if ((int)a.size() != n) throw StructuralError("event vector has wrong length");
    for (const Rat& v : a)
        if (v < 0 || v > 1) throw PreconditionError("event values must lie in [0,1]");

    RatVec out(n, Rat(0));
    for (const auto& block : blocks.blocks) {
        Rat mass(0), avg(0);
        for (int x : block) mass += sp.p[x];
        if (mass == 0) continue; // null block: conditional value 0
        for (int x : block) avg += a[x] * sp.p[x];
        avg /= mass;
        for (int x : block) out[x] = avg;
    }
    return out;
}

bool verify_conditional_identity(const FiniteProbSpace& sp, const BlockPartition& blocks,
                                 const RatVec& a, const RatVec& expectation) {
    const int nb = (int)blocks.blocks.size();
    if (nb > 20) throw PreconditionError("too many blocks for exhaustive union checking");
    for (uint32_t mask = 0; mask < (1u << nb); ++mask) {
        Rat lhs(0), rhs(0);
        for (int b = 0; b < nb; ++b) {
            if (!(mask & (1u << b))) continue;
            for (int x : blocks.blocks[b]) {
                lhs += expectation[x] * sp.p[x];
                rhs += a[x] * sp.p[x];
            }
        }
        if (lhs != rhs) return false;
    }
    return true;
}

QuotientAveraging quotient_strong_operator(const FiniteProbSpace& sp,
                                           const BlockPartition& blocks) {
    check_structure(sp, &blocks);
    const int n = (int)sp.p.size();
    QuotientAveraging q;
    std::vector<int> new_index(n, -1);
    for (int x = 0; x < n; ++x)
        if (sp.p[x] > 0) {
            new_index[x] = (int)q.kept.size();
            q.kept.push_back(x);
        }
    const int m = (int)q.kept.size();
    if (m == 0) throw PreconditionError("probability space has empty support");

    q.t.t.assign(m, RatVec(m, Rat(0)));
    for (const auto& block : blocks.blocks) {
        Rat mass(0);
        for (int x : block) mass += sp.p[x];
        if (mass == 0) continue;
        for (int x : block) {
            if (new_index[x] < 0) continue;
            for (int y : block) {
                if (new_index[y] < 0) continue;
                q.t.t[new_index[x]][new_index[y]] = sp.p[y] / mass;
            }
        }
    }

    ValidationReport rep = validate_stochastic_idempotent(q.t, 0);
    if (!rep.valid)
        throw ConsistencyError("blockwise averaging is not a stochastic idempotent");
    MinClosureResult strong = is_strong_commutative(q.t, 0);
    if (!strong.strong)
        throw ConsistencyError("blockwise averaging is not strong");
    // Range check: class indicators are exactly the surviving block indicators.
    RecurrentStructure st = analyze_idempotent(q.t, 0);
    std::vector<std::vector<int>> expected;
    for (const auto& block : blocks.blocks) {
        std::vector<int> surv;
        for (int x : block)
            if (new_index[x] >= 0) surv.push_back(new_index[x]);
        if (!surv.empty()) expected.push_back(surv);
    }
    auto norm = [](std::vector<std::vector<int>> v) {
        for (auto& b : v) std::sort(b.begin(), b.end());
        std::sort(v.begin(), v.end());
        return v;
    };
    if (norm(st.classes) != norm(expected))
        throw ConsistencyError("recurrent classes do not match the surviving blocks");
    return q;
}

InducedCeReport mv_ce_from_strong_operator(const StochasticMatrix& t, const RatVec& s,
                                           uint64_t seed) {
    MinClosureResult strong = is_strong_commutative(t, 0, seed);
    if (!strong.strong)
        throw PreconditionError("induced conditional expectation requires a strong "
                                "operator");
    const int n = t.n();
    if ((int)s.size() != n) throw StructuralError("state vector has wrong length");
    Rat total(0);
    for (const Rat& w : s) {
        if (w < 0) throw StructuralError("negative state weight");
        total += w;
    }
    if (total != 1) throw StructuralError("state weights must sum to 1");

    RecurrentStructure st = analyze_idempotent(t, 0);
    const int k = (int)st.classes.size();

    InducedCeReport rep;
    // Transported measure w = T^t s: integrating Tf against s.
    rep.weights.assign(n, Rat(0));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) rep.weights[j] += s[i] * t.t[i][j];

    // Basins: rows equal to a class row; crisp range indicators are exactly
    // unions of basins (strongness makes every row a class row).
    std::vector<int> basin(n, -1);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < k; ++c) {
            bool same = true;
            for (int j = 0; j < n; ++j)
                if (t.t[i][j] != st.pi[c][j]) { same = false; break; }
            if (same) { basin[i] = c; break; }
        }
    for (int i = 0; i < n; ++i)
        if (basin[i] < 0)
            throw ConsistencyError("strong operator has a row that is not a class row");

    if (k > 20) throw PreconditionError("too many classes for exhaustive crisp checking");

    auto check_vector = [&](const RatVec& a) -> bool {
        RatVec ta = row_apply(t.t, a);
        for (uint32_t mask = 1; mask < (1u << k); ++mask) {
            Rat lhs(0), rhs(0);
            for (int x = 0; x < n; ++x) {
                if (!(mask & (1u << basin[x]))) continue;
                lhs += ta[x] * rep.weights[x];
                rhs += a[x] * rep.weights[x];
            }
            if (lhs != rhs) return false;
        }
        return true;
    };

    for (uint32_t mask = 1; mask < (1u << k); ++mask) {
        std::vector<int> members;
        for (int x = 0; x < n; ++x)
            if (mask & (1u << basin[x])) members.push_back(x);
        rep.crisp.push_back(members);
    }

    rep.ok = true;
    for (int x = 0; x < n && rep.ok; ++x) {
        RatVec ex(n, Rat(0));
        ex[x] = 1;
        if (!check_vector(ex)) {
            rep.ok = false;
            rep.failure = "coordinate vector " + std::to_string(x);
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(0, 12);
    for (int trial = 0; trial < 100 && rep.ok; ++trial) {
        RatVec a(n);
        for (int i = 0; i < n; ++i) a[i] = Rat(num(rng)) / 12;
        if (!check_vector(a)) {
            rep.ok = false;
            rep.failure = "random vector, trial " + std::to_string(trial);
        }
    }
    return rep;
}

}  // namespace effalg
