#include "effalg/state_ops.hpp"

#include <algorithm>
#include <functional>

#include "effalg/errors.hpp"

namespace effalg {

namespace {

void check_map_structure(const FiniteEffectAlgebra& e, const ElementMap& m) {
    if ((int)m.tau.size() != e.n) throw StructuralError("map must assign every element");
    for (int v : m.tau)
        if (v < 0 || v >= e.n) throw StructuralError("map value out of range");
}

} // namespace

StateOperatorReport validate_state_operator(const FiniteEffectAlgebra& e,
                                            const ElementMap& m) {
    check_map_structure(e, m);
    ValidationReport alg = validate_effect_algebra(e);
    if (!alg.valid) throw PreconditionError("state operator check requires a valid algebra");

    StateOperatorReport rep;
    const int n = e.n;
    const auto& t = m.tau;

    if (t[e.one] != e.one)
        rep.violations.push_back({"(i)", {e.one}, "tau(1) != 1"});
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            if (e.defined(a, b)) {
                if (!e.defined(t[a], t[b]) || e.plus(t[a], t[b]) != t[e.plus(a, b)])
                    rep.violations.push_back({"(ii)", {a, b}});
            }
    for (int a = 0; a < n; ++a)
        if (t[t[a]] != t[a]) rep.violations.push_back({"(iii)", {a}});

    rep.is_state_operator = rep.violations.empty();
    if (!rep.is_state_operator) return rep;

    DerivedOrder ord = derive_order(e);

    for (int a = 0; a < n; ++a)
        if (t[a] == e.zero) rep.kernel.push_back(a);
    rep.is_faithful = (rep.kernel.size() == 1 && rep.kernel[0] == e.zero);

    bool strong = true;
    for (int a = 0; a < n && strong; ++a)
        for (int b = 0; b < n && strong; ++b) {
            auto w = meet(ord, t[a], t[b]);
            if (w && t[*w] != *w) {
                strong = false;
                rep.strong_witness = {a, b};
            }
        }
    rep.is_strong = strong;

    // Laws implied by (i)-(iii); failures here mean a bug, not bad input.
    auto law = [&](bool ok, const char* name, std::vector<int> wit) {
        if (!ok) rep.law_failures.push_back({name, std::move(wit)});
    };
    law(t[e.zero] == e.zero, "zero-fixed", {e.zero});
    for (int a = 0; a < n; ++a)
        law(t[ord.perp[a]] == ord.perp[t[a]], "orthosupplement-exchange", {a});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (ord.leq[a][b]) {
                law(ord.leq[t[a]][t[b]], "monotone", {a, b});
                int d = ord.minus[b][a];
                int td = ord.minus[t[b]][t[a]];
                law(td != kUndef && t[d] == td, "difference-exchange", {a, b});
            }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            auto w = meet(ord, a, b);
            if (w) law(ord.leq[t[*w]][t[a]] && ord.leq[t[*w]][t[b]], "meet-bound", {a, b});
            auto j = join(ord, a, b);
            if (j) law(ord.leq[t[a]][t[*j]] && ord.leq[t[b]][t[*j]], "join-bound", {a, b});
        }
    // Range is a sub-effect-algebra: contains 0 and 1, closed under
    // orthosupplement and defined sums.
    {
        std::vector<bool> range(n, false);
        for (int a = 0; a < n; ++a) range[t[a]] = true;
        law(range[e.zero] && range[e.one], "range-bounds", {});
        for (int a = 0; a < n; ++a)
            if (range[a]) {
                law(range[ord.perp[a]], "range-orthosupplement", {a});
                for (int b = 0; b < n; ++b)
                    if (range[b] && e.defined(a, b))
                        law(range[e.plus(a, b)], "range-sum", {a, b});
            }
    }
    return rep;
}

std::vector<ElementMap> enumerate_state_operators(const FiniteEffectAlgebra& e, int bound) {
    ValidationReport alg = validate_effect_algebra(e);
    if (!alg.valid) throw PreconditionError("enumeration requires a valid algebra");
    if (e.n > bound) {
        mpz_class count;
        mpz_ui_pow_ui(count.get_mpz_t(), e.n, e.n);
        throw PreconditionError("refusing to enumerate " + count.get_str() +
                                " candidate maps on " + std::to_string(e.n) +
                                " elements; raise the bound to allow it");
    }

    const int n = e.n;
    std::vector<int> t(n, kUndef);
    std::vector<int> trail;
    std::vector<ElementMap> found;

    auto assign = [&](int a, int v) {
        t[a] = v;
        trail.push_back(a);
    };

    // Propagate forced values: additivity on defined sums with two known
    // arguments, and idempotence (range values are fixed points).
    std::function<bool()> propagate = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int a = 0; a < n; ++a) {
                if (t[a] == kUndef) continue;
                if (t[t[a]] == kUndef) {
                    assign(t[a], t[a]);
                    changed = true;
                } else if (t[t[a]] != t[a]) {
                    return false;
                }
                for (int b = a; b < n; ++b) {
                    if (t[b] == kUndef || !e.defined(a, b)) continue;
                    if (!e.defined(t[a], t[b])) return false;
                    int target = e.plus(a, b);
                    int v = e.plus(t[a], t[b]);
                    if (t[target] == kUndef) {
                        assign(target, v);
                        changed = true;
                    } else if (t[target] != v) {
                        return false;
                    }
                }
            }
        }
        return true;
    };

    std::function<void()> search = [&]() {
        int a = -1;
        for (int i = 0; i < n; ++i)
            if (t[i] == kUndef) { a = i; break; }
        if (a < 0) {
            found.push_back(ElementMap{t});
            return;
        }
        for (int v = 0; v < n; ++v) {
            size_t mark = trail.size();
            assign(a, v);
            if (propagate()) search();
            while (trail.size() > mark) {
                t[trail.back()] = kUndef;
                trail.pop_back();
            }
        }
    };

    size_t mark = trail.size();
    assign(e.one, e.one);
    assign(e.zero, e.zero);
    if (propagate()) search();
    while (trail.size() > mark) {
        t[trail.back()] = kUndef;
        trail.pop_back();
    }

    std::sort(found.begin(), found.end(),
              [](const ElementMap& x, const ElementMap& y) { return x.tau < y.tau; });
    // All candidates passed propagation-level constraints; confirm with the
    // full validator, which also covers sums discovered only at the end.
    std::vector<ElementMap> out;
    for (const auto& cand : found)
        if (validate_state_operator(e, cand).is_state_operator) out.push_back(cand);
    return out;
}

QuotientStateOp quotient_state_operator(const FiniteEffectAlgebra& e, const ElementMap& tau) {
    StateOperatorReport rep = validate_state_operator(e, tau);
    if (!rep.is_state_operator)
        throw PreconditionError("quotient requires a state operator");

    if (!is_ideal(e, rep.kernel))
        throw ConsistencyError("kernel of a state operator failed the ideal test");

    QuotientResult q = quotient_mv(e, rep.kernel); // also enforces the MV precondition

    const int nq = q.algebra.n;
    ElementMap induced;
    induced.tau.assign(nq, kUndef);
    for (int c = 0; c < nq; ++c)
        induced.tau[c] = q.class_of[tau.tau[q.representative[c]]];
    // Well defined on every element, not only representatives.
    for (int a = 0; a < e.n; ++a)
        if (q.class_of[tau.tau[a]] != induced.tau[q.class_of[a]])
            throw ConsistencyError("induced map not constant on congruence classes");

    StateOperatorReport qrep = validate_state_operator(q.algebra, induced);
    if (!qrep.is_state_operator)
        throw ConsistencyError("induced map on the quotient is not a state operator");
    if (!qrep.is_faithful.value_or(false))
        throw ConsistencyError("induced operator on the kernel quotient is not faithful");

    return {std::move(q), std::move(induced)};
}

StateVector induced_state(const FiniteEffectAlgebra& e, const ElementMap& tau,
                          const StateVector& omega,
                          const std::vector<StateVector>& ordering_set) {
    StateOperatorReport rep = validate_state_operator(e, tau);
    if (!rep.is_state_operator)
        throw PreconditionError("induced state requires a state operator");
    OrderingSetResult ord = is_ordering_set(e, ordering_set);
    if (!ord.ordering)
        throw PreconditionError("supplied set of states is not an ordering set");
    bool member = false;
    for (const auto& s : ordering_set)
        if (s.values == omega.values) { member = true; break; }
    if (!member)
        throw PreconditionError("omega must belong to the supplied ordering set");

    StateVector s;
    s.values.resize(e.n);
    for (int a = 0; a < e.n; ++a) s.values[a] = omega.values[tau.tau[a]];
    if (!is_state(e, s))
        throw ConsistencyError("composition of a state with a state operator "
                               "failed the state test");
    return s;
}

}  // namespace effalg
