#include "effalg/jc_state_ops.hpp"

#include <algorithm>

#include "effalg/errors.hpp"

namespace effalg {

namespace {

// Orthonormal coordinate basis of the column space of a map's action.
RMat range_basis(const RMat& action, double rel_threshold = 1e-10) {
    Eigen::ColPivHouseholderQR<RMat> qr(action);
    qr.setThreshold(rel_threshold);
    int r = (int)qr.rank();
    RMat q = qr.householderQ();
    return q.leftCols(r);
}

// abs_floor guards the all-kernel case: when the action is numerical noise,
// a purely relative cut would invent rank.
RMat kernel_basis(const RMat& action, double rel_threshold = 1e-10,
                  double abs_floor = 0) {
    Eigen::JacobiSVD<RMat> svd(action, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double cut = std::max((s.size() ? s(0) : 0.0) * rel_threshold, abs_floor);
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++rank;
    return svd.matrixV().rightCols(svd.matrixV().cols() - rank);
}

double membership_defect(const RMat& q, const RVec& v) {
    return (v - q * (q.transpose() * v)).norm();
}

CMat symmetrize(const CMat& a) { return (a + a.adjoint()) / 2.0; }

} // namespace

ValidationReport validate_pvm(const std::vector<CMat>& pvm, const Tolerances& tol) {
    ValidationReport rep;
    if (pvm.empty()) {
        rep.fail("complete", {}, "empty measure");
        return rep;
    }
    const int d = (int)pvm[0].rows();
    for (size_t i = 0; i < pvm.size(); ++i) {
        const CMat& p = pvm[i];
        if (p.rows() != d || p.cols() != d) {
            rep.fail("shape", {(int)i}, "projection dimension mismatch");
            return rep;
        }
        if (!is_hermitian(p, tol.eps_eq)) rep.fail("hermitian", {(int)i});
        if (opnorm(p * p - p) > tol.eps_eq) rep.fail("idempotent", {(int)i});
    }
    for (size_t i = 0; i < pvm.size(); ++i)
        for (size_t j = i + 1; j < pvm.size(); ++j)
            if (opnorm(pvm[i] * pvm[j]) > tol.eps_eq) rep.fail("orthogonal", {(int)i, (int)j});
    CMat sum = CMat::Zero(d, d);
    for (const CMat& p : pvm) sum += p;
    if (opnorm(sum - CMat::Identity(d, d)) > tol.eps_eq) rep.fail("complete", {});
    return rep;
}

HermitianMap pinching_map(const std::vector<CMat>& pvm, const Tolerances& tol) {
    ValidationReport rep = validate_pvm(pvm, tol);
    if (!rep.valid) throw PreconditionError("pinching requires a valid PVM");
    const int d = (int)pvm[0].rows();
    return HermitianMap::from_function(d, [&](const CMat& a) {
        CMat out = CMat::Zero(d, d);
        for (const CMat& p : pvm) out += p * a * p;
        return out;
    });
}

MapCheckReport check_state_operator(const HermitianMap& m, const Tolerances& tol,
                                    uint64_t seed, int samples) {
    MapCheckReport rep;
    const int d = m.d;
    const CMat id = CMat::Identity(d, d);

    rep.unital_err = opnorm(m.apply(id) - id);
    rep.unital = rep.unital_err <= tol.eps_eq;

    rep.idem_err = opnorm_real(m.action * m.action - m.action);
    rep.idempotent = rep.idem_err <= tol.eps_eq;

    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = 0;
    auto probe = [&](const CMat& a) {
        double e = min_eig(m.apply(a));
        worst = std::min(worst, e);
    };
    for (int i = 0; i < d; ++i) {
        CMat p = CMat::Zero(d, d);
        p(i, i) = 1.0;
        probe(p);
    }
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd v(d);
        for (int i = 0; i < d; ++i) v(i) = std::complex<double>(g(rng), g(rng));
        double n = v.norm();
        if (n == 0) continue;
        v /= n;
        probe(v * v.adjoint());
    }
    rep.min_psd_eig = worst;
    rep.positive = worst >= -tol.eps_psd;
    rep.ok = rep.unital && rep.positive && rep.idempotent;
    return rep;
}

SquareGaps square_inequality_gaps(const HermitianMap& m, const CMat& a) {
    CMat h = symmetrize(a);
    CMat ma = m.apply(h);
    CMat m_sq = m.apply(h * h);
    CMat m_ma_sq = m.apply(ma * ma);
    return {min_eig(m_ma_sq - ma * ma), min_eig(m_sq - m_ma_sq)};
}

CeResult is_conditional_expectation(const HermitianMap& m, const Tolerances& tol,
                                    uint64_t seed, int samples) {
    const HermitianBasis& basis = basis_for(m.d);
    CeResult res;

    RMat q = range_basis(m.action);
    const int r = (int)q.cols();
    std::vector<CMat> rb;
    for (int i = 0; i < r; ++i) rb.push_back(basis.matrix(q.col(i)));

    double worst = 0;
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < r; ++k)
            for (int j = i; j < r; ++j) {
                CMat t = triple_product(rb[i], rb[k], rb[j]) +
                         triple_product(rb[j], rb[k], rb[i]);
                worst = std::max(worst, membership_defect(q, basis.coords(t)));
            }
    res.basis_residual = worst;
    bool closed = worst <= std::max(tol.eps_eq, 1e-8);

    Rng rng(seed);
    double sampled = 0;
    std::optional<std::pair<CMat, CMat>> wit;
    for (int s = 0; s < samples; ++s) {
        CMat a = random_effect(m.d, rng);
        CMat b = random_effect(m.d, rng);
        CMat ma = m.apply(a);
        double defect = opnorm(m.apply(ma * b * ma) - symmetrize(ma * m.apply(b) * ma));
        if (defect > sampled) {
            sampled = defect;
            if (defect > std::max(tol.eps_eq, 1e-8)) wit = {a, b};
        }
    }
    res.sampled_residual = sampled;
    bool sampled_ok = sampled <= std::max(tol.eps_eq, 1e-8);

    if (closed != sampled_ok)
        throw ConsistencyError("range closure and sampled multiplicativity disagree "
                               "on the conditional expectation test");
    res.is_ce = closed;
    if (!closed) res.witness = wit;
    return res;
}

JordanResult is_jordan_state_operator(const HermitianMap& m, const Tolerances& tol,
                                      const std::vector<CMat>& domain_basis) {
    const HermitianBasis& basis = basis_for(m.d);
    std::vector<CMat> dom = domain_basis;
    if (dom.empty())
        for (int k = 0; k < basis.dim(); ++k) dom.push_back(basis.element(k));

    JordanResult res;
    const int n = (int)dom.size();
    double worst = 0;
    int wi = -1, wj = -1;
    // Polarized: b(a,c) = m(a.c) - m(m(a).m(c)) vanishes on all pairs iff
    // m(a^2) = m(m(a)^2) on the span.
    std::vector<CMat> images(n);
    for (int i = 0; i < n; ++i) images[i] = m.apply(dom[i]);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            CMat defect = m.apply(jordan_product(dom[i], dom[j])) -
                          m.apply(jordan_product(images[i], images[j]));
            double e = opnorm(defect);
            if (e > worst) {
                worst = e;
                wi = i;
                wj = j;
            }
        }
    res.residual = worst;
    res.is_jordan = worst <= std::max(tol.eps_eq, 1e-8);
    if (!res.is_jordan) {
        // Turn the failing pair into a single Hermitian witness.
        auto defect_at = [&](const CMat& a) {
            CMat ma = m.apply(a);
            return opnorm(m.apply(a * a) - m.apply(ma * ma));
        };
        CMat cand = dom[wi];
        if (defect_at(cand) <= res.residual / 4) {
            cand = dom[wi] + dom[wj];
            if (defect_at(cand) <= res.residual / 4) cand = dom[wi] - dom[wj];
        }
        res.witness = cand;
    } else {
        // Kernel elements must have m(k^2) = 0; spot-check the kernel basis.
        RMat kb = kernel_basis(m.action);
        double worst_k = 0;
        for (int c = 0; c < kb.cols(); ++c) {
            CMat k = basis.matrix(kb.col(c));
            worst_k = std::max(worst_k, opnorm(m.apply(k * k)));
        }
        res.kernel_square_ok = worst_k <= std::max(tol.eps_eq, 1e-7);
    }
    return res;
}

EquivalenceReport equivalence_lemma_check(const HermitianMap& m, const CMat& a,
                                          const Tolerances& tol) {
    const HermitianBasis& basis = basis_for(m.d);
    CMat h = symmetrize(a);
    CMat ma = m.apply(h);
    EquivalenceReport rep;

    rep.square_residual = opnorm(m.apply(h * h) - ma * ma);
    for (int k = 0; k < basis.dim(); ++k) {
        const CMat& b = basis.element(k);
        CMat mb = m.apply(b);
        rep.jordan_residual = std::max(
            rep.jordan_residual,
            opnorm(m.apply(jordan_product(h, b)) - jordan_product(ma, mb)));
        rep.triple_residual = std::max(
            rep.triple_residual,
            opnorm(m.apply(h * b * h) - symmetrize(ma * mb * ma)));
    }
    double thr = std::max(tol.eps_eq, 1e-8);
    rep.square = rep.square_residual <= thr;
    rep.jordan = rep.jordan_residual <= thr;
    rep.triple = rep.triple_residual <= thr;
    rep.agree = (rep.square == rep.jordan) && (rep.jordan == rep.triple);
    return rep;
}

EquivalenceReport second_lemma_check(const HermitianMap& m, const CMat& a,
                                     const Tolerances& tol) {
    const HermitianBasis& basis = basis_for(m.d);
    CMat h = symmetrize(a);
    CMat ma = m.apply(h);
    EquivalenceReport rep;

    rep.square_residual = opnorm(m.apply(h * h) - m.apply(ma * ma));
    for (int k = 0; k < basis.dim(); ++k) {
        const CMat& b = basis.element(k);
        CMat mb = m.apply(b);
        rep.jordan_residual = std::max(
            rep.jordan_residual,
            opnorm(m.apply(jordan_product(h, b)) - m.apply(jordan_product(ma, mb))));
        rep.triple_residual = std::max(
            rep.triple_residual,
            opnorm(m.apply(h * b * h) - m.apply(symmetrize(ma * mb * ma))));
    }
    double thr = std::max(tol.eps_eq, 1e-8);
    rep.square = rep.square_residual <= thr;
    rep.jordan = rep.jordan_residual <= thr;
    rep.triple = rep.triple_residual <= thr;
    rep.agree = (rep.square == rep.jordan) && (rep.jordan == rep.triple);
    return rep;
}

namespace {

// Projection onto the kernel of a PSD matrix; eigenvalues below
// rel * max(1, largest) count as zero.
CMat kernel_projection_psd(const CMat& w, double rel = 1e-9) {
    Eigen::SelfAdjointEigenSolver<CMat> es(symmetrize(w));
    const auto& ev = es.eigenvalues();
    double cut = rel * std::max(1.0, ev(ev.size() - 1));
    CMat proj = CMat::Zero(w.rows(), w.cols());
    for (int i = 0; i < ev.size(); ++i)
        if (ev(i) <= cut) proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    return proj;
}

} // namespace

CMat support_projection(const HermitianMap& m, const Tolerances& tol, uint64_t seed) {
    const int d = m.d;
    const HermitianBasis& basis = basis_for(d);
    const CMat id = CMat::Identity(d, d);

    // w = m*(1): tr(w a) = tr(m(a)). For positive m and a psd, m(a) = 0 iff
    // tr(w a) = 0, so the annihilated projections are exactly those under the
    // kernel projection of w.
    CMat w = symmetrize(m.adjoint().apply(id));
    CMat f = kernel_projection_psd(w);
    CMat e = id - f;

    double ann_thr = std::max(tol.eps_eq, 1e-8);

    // Certification. (1) The complement really is annihilated.
    if (opnorm(m.apply(f)) > ann_thr)
        throw CertificationError("candidate complement not annihilated by the map");

    // (2) Spectral candidates harvested from the kernel of the action must
    // stay below f whenever they are annihilated.
    RMat kb = kernel_basis(m.action);
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<CMat> kernel_elems;
    for (int c = 0; c < kb.cols(); ++c) kernel_elems.push_back(basis.matrix(kb.col(c)));
    for (int extra = 0; extra < 8 && kb.cols() > 0; ++extra) {
        RVec mix = RVec::Zero(kb.rows());
        for (int c = 0; c < kb.cols(); ++c) mix += g(rng) * kb.col(c);
        kernel_elems.push_back(basis.matrix(mix));
    }
    for (const CMat& k : kernel_elems) {
        Eigen::SelfAdjointEigenSolver<CMat> es(symmetrize(k));
        const auto& ev = es.eigenvalues();
        double scale = std::max({1.0, std::abs(ev(0)), std::abs(ev(ev.size() - 1))});
        // Sign-grouped spectral projections of each kernel element.
        CMat pos = CMat::Zero(d, d), neg = CMat::Zero(d, d);
        for (int i = 0; i < ev.size(); ++i) {
            CMat pi = es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
            if (ev(i) > 1e-7 * scale) pos += pi;
            else if (ev(i) < -1e-7 * scale) neg += pi;
        }
        for (const CMat& cand : {pos, neg}) {
            if (opnorm(m.apply(cand)) > ann_thr) continue;
            if (opnorm(cand - f * cand * f) > 1e-6)
                throw CertificationError("annihilated spectral candidate not dominated "
                                         "by the computed complement");
        }
    }

    // (3) Displacement laws on a random sample: m(a) = m(eae) and
    // [e, m(a)] = 0.
    for (int s = 0; s < 32; ++s) {
        CMat a = random_effect(d, rng);
        CMat ma = m.apply(a);
        if (opnorm(ma - m.apply(e * a * e)) > 1e-6 ||
            opnorm(e * ma - ma * e) > 1e-6)
            throw CertificationError("support certification failed the displacement laws");
    }
    return e;
}

HermitianMap compress_to_support(const HermitianMap& m, const CMat& e,
                                 const Tolerances& tol, uint64_t seed) {
    const int d = m.d;
    CMat expected = support_projection(m, tol, seed);
    if (opnorm(symmetrize(e) - expected) > std::max(tol.eps_eq, 1e-8))
        throw PreconditionError("compression requires the support projection of the map");

    // Isometry onto the range of e.
    Eigen::SelfAdjointEigenSolver<CMat> es(symmetrize(e));
    std::vector<int> cols;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) cols.push_back(i);
    const int r = (int)cols.size();
    if (r == 0) throw PreconditionError("support projection is zero");
    CMat v(d, r);
    for (int i = 0; i < r; ++i) v.col(i) = es.eigenvectors().col(cols[i]);

    HermitianMap out = HermitianMap::from_function(r, [&](const CMat& x) {
        return (v.adjoint() * m.apply(v * x * v.adjoint()) * v).eval();
    });

    MapCheckReport chk = check_state_operator(out, tol, seed, 512);
    if (!chk.ok)
        throw ConsistencyError("compressed map failed the state operator check");
    CMat w = symmetrize(out.adjoint().apply(CMat::Identity(r, r)));
    if (min_eig(w) <= 1e-9)
        throw ConsistencyError("compressed map is not faithful");
    CeResult ce = is_conditional_expectation(out, tol, seed, 64);
    if (!ce.is_ce)
        throw ConsistencyError("compressed map is not a conditional expectation");
    return out;
}

Decomposition decompose_state_operator(const HermitianMap& m, const Tolerances& tol,
                                       uint64_t seed) {
    const int d = m.d;
    const HermitianBasis& basis = basis_for(d);
    const CMat id = CMat::Identity(d, d);
    const double thr = std::max(tol.eps_eq, 1e-8);

    Decomposition dec;
    dec.support = support_projection(m, tol, seed);
    const CMat& e = dec.support;
    CMat f = id - e;

    dec.mu = HermitianMap::from_function(
        d, [&](const CMat& a) { return (symmetrize(m.apply(a) * e) + f * a * f).eval(); });

    // Multiplicative domain: nullspace of a -> m(a . b_k) - m(m(a) . m(b_k))
    // stacked over the basis.
    RMat stacked(basis.dim() * basis.dim(), basis.dim());
    for (int k = 0; k < basis.dim(); ++k) {
        RMat jk = HermitianMap::from_function(
                      d, [&](const CMat& x) { return jordan_product(x, basis.element(k)); })
                      .action;
        CMat mbk = m.apply(basis.element(k));
        RMat jmk = HermitianMap::from_function(
                       d, [&](const CMat& x) { return jordan_product(x, mbk); })
                       .action;
        stacked.middleRows(k * basis.dim(), basis.dim()) =
            m.action * jk - m.action * jmk * m.action;
    }
    RMat dom = kernel_basis(stacked, 1e-10, thr);
    for (int c = 0; c < dom.cols(); ++c)
        dec.multiplicative_domain.push_back(basis.matrix(dom.col(c)));

    // range(mu) must equal the multiplicative domain.
    RMat mu_range = range_basis(dec.mu.action);
    if (mu_range.cols() != dom.cols())
        throw ConsistencyError("rank of the factor range differs from the "
                               "multiplicative domain");
    double match = 0;
    for (int c = 0; c < dom.cols(); ++c)
        match = std::max(match, membership_defect(mu_range, dom.col(c)));
    for (int c = 0; c < mu_range.cols(); ++c)
        match = std::max(match, membership_defect(dom, mu_range.col(c)));
    if (match > thr)
        throw ConsistencyError("factor range does not match the multiplicative domain");

    MapCheckReport chk = check_state_operator(dec.mu, tol, seed, 1024);
    if (!chk.ok) throw ConsistencyError("first factor failed the state operator check");
    CeResult ce = is_conditional_expectation(dec.mu, tol, seed, 64);
    if (!ce.is_ce) throw ConsistencyError("first factor is not a conditional expectation");
    CMat w = symmetrize(dec.mu.adjoint().apply(id));
    if (min_eig(w) <= 1e-9) throw ConsistencyError("first factor is not faithful");

    // Second factor: m itself, read on range(mu).
    RMat proj = mu_range * mu_range.transpose();
    dec.phi = {d, m.action * proj};

    JordanResult jr = is_jordan_state_operator(dec.phi, tol, dec.multiplicative_domain);
    if (!jr.is_jordan)
        throw ConsistencyError("second factor is not Jordan multiplicative on the "
                               "multiplicative domain");
    if (opnorm_real(dec.phi.action * dec.mu.action - m.action) > thr)
        throw ConsistencyError("factorization does not recompose to the map");
    return dec;
}

HermitianMap extend_to_linear(int d, const std::function<CMat(const CMat&)>& effect_map,
                              const Tolerances& tol, uint64_t seed) {
    const HermitianBasis& basis = basis_for(d);
    const double thr = std::max(tol.eps_eq, 1e-7);
    Rng rng(seed);

    // Oracle spot-checks: additivity on summable effect pairs, idempotence,
    // homogeneity at rational and irrational scalars.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 16; ++s) {
        CMat a = random_effect(d, rng);
        CMat rest = CMat::Identity(d, d) - a;
        CMat b = u(rng) * rest; // a + b <= 1
        if (opnorm(effect_map(a + b) - effect_map(a) - effect_map(b)) > thr)
            throw PreconditionError("effect assignment failed the additivity spot-check");
        if (opnorm(effect_map(effect_map(a)) - effect_map(a)) > thr)
            throw PreconditionError("effect assignment failed the idempotence spot-check");
        for (double alpha : {0.5, 1.0 / 3.0, std::sqrt(2.0) / 2.0}) {
            if (opnorm(effect_map(alpha * a) - alpha * effect_map(a)) > thr)
                throw PreconditionError("effect assignment failed the homogeneity "
                                        "spot-check");
        }
    }

    // p on psd matrices by scaling into the effect interval.
    auto on_psd = [&](const CMat& x) -> CMat {
        double top = std::max(1.0, opnorm(x));
        return top * effect_map(x / top);
    };
    auto split = [&](const CMat& h) {
        Eigen::SelfAdjointEigenSolver<CMat> es(symmetrize(h));
        CMat pos = CMat::Zero(d, d), neg = CMat::Zero(d, d);
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            double lam = es.eigenvalues()(i);
            CMat pi = es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
            if (lam >= 0) pos += lam * pi;
            else neg -= lam * pi;
        }
        return std::make_pair(pos, neg);
    };
    auto extended = [&](const CMat& h) -> CMat {
        auto [pos, neg] = split(h);
        return on_psd(pos) - on_psd(neg);
    };

    HermitianMap out = HermitianMap::from_function(d, extended);

    // Decomposition independence: shifting both parts by a psd c must not
    // change the value; the built map must agree with direct evaluation.
    for (int s = 0; s < 8; ++s) {
        CMat h = random_hermitian(d, rng);
        auto [pos, neg] = split(h);
        CMat c = random_psd(d, rng);
        CMat alt = on_psd(pos + c) - on_psd(neg + c);
        if (opnorm(alt - out.apply(h)) > 1e-6)
            throw PreconditionError("extension is not independent of the positive "
                                    "decomposition");
    }
    for (int k = 0; k < basis.dim(); ++k) {
        CMat b = basis.element(k);
        if (opnorm(out.apply(b) - extended(b)) > 1e-9)
            throw ConsistencyError("extension disagrees with direct evaluation");
    }
    return out;
}

}  // namespace effalg
