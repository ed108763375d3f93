#include "effalg/hermitian.hpp"

#include <map>
#include <mutex>

#include "effalg/errors.hpp"

namespace effalg {

using cxd = std::complex<double>;

double opnorm(const CMat& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::JacobiSVD<CMat> svd(a);
    return svd.singularValues()(0);
}

double opnorm_real(const RMat& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::JacobiSVD<RMat> svd(a);
    return svd.singularValues()(0);
}

double min_eig(const CMat& a) {
    CMat h = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

bool is_hermitian(const CMat& a, double eps) {
    return opnorm(a - a.adjoint()) <= eps;
}

bool is_effect(const CMat& a, double eps) {
    if (!is_hermitian(a, eps)) return false;
    CMat h = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= -eps && es.eigenvalues()(a.rows() - 1) <= 1.0 + eps;
}

CMat jordan_product(const CMat& a, const CMat& b) { return (a * b + b * a) / 2.0; }

CMat triple_product(const CMat& a, const CMat& b, const CMat& c) {
    return (a * b * c + c * b * a) / 2.0;
}

HermitianBasis::HermitianBasis(int d) : d_(d) {
    if (d < 1) throw StructuralError("dimension must be positive");
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        CMat m = CMat::Zero(d, d);
        m(i, i) = 1.0;
        elems_.push_back(m);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            CMat m = CMat::Zero(d, d);
            m(i, j) = s;
            m(j, i) = s;
            elems_.push_back(m);
        }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            CMat m = CMat::Zero(d, d);
            m(i, j) = cxd(0, s);
            m(j, i) = cxd(0, -s);
            elems_.push_back(m);
        }
}

RVec HermitianBasis::coords(const CMat& a) const {
    RVec v(dim());
    for (int k = 0; k < dim(); ++k) v(k) = (elems_[k] * a).trace().real();
    return v;
}

CMat HermitianBasis::matrix(const RVec& v) const {
    CMat a = CMat::Zero(d_, d_);
    for (int k = 0; k < dim(); ++k) a += v(k) * elems_[k];
    return a;
}

const HermitianBasis& basis_for(int d) {
    static std::map<int, HermitianBasis> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, HermitianBasis(d)).first;
    return it->second;
}

CMat HermitianMap::apply(const CMat& a) const {
    const HermitianBasis& b = basis_for(d);
    return b.matrix(action * b.coords(a));
}

HermitianMap HermitianMap::compose(const HermitianMap& inner) const {
    if (d != inner.d) throw StructuralError("composition dimension mismatch");
    return {d, action * inner.action};
}

HermitianMap HermitianMap::adjoint() const { return {d, action.transpose()}; }

HermitianMap HermitianMap::identity(int d) {
    return {d, RMat::Identity(d * d, d * d)};
}

HermitianMap HermitianMap::from_function(int d,
                                         const std::function<CMat(const CMat&)>& f) {
    const HermitianBasis& b = basis_for(d);
    RMat m(b.dim(), b.dim());
    for (int k = 0; k < b.dim(); ++k) {
        CMat img = f(b.element(k));
        m.col(k) = b.coords((img + img.adjoint()) / 2.0);
    }
    return {d, m};
}

CMat random_hermitian(int d, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cxd(g(rng), g(rng));
    return (a + a.adjoint()) / 2.0;
}

CMat random_unitary(int d, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cxd(g(rng), g(rng));
    Eigen::HouseholderQR<CMat> qr(a);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        cxd rii = r(i, i);
        double n = std::abs(rii);
        q.col(i) *= (n > 0) ? rii / n : cxd(1, 0);
    }
    return q;
}

CMat random_effect(int d, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CMat q = random_unitary(d, rng);
    CMat diag = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i) diag(i, i) = u(rng);
    return q * diag * q.adjoint();
}

CMat random_psd(int d, Rng& rng, int rank) {
    if (rank < 0 || rank > d) rank = d;
    std::uniform_real_distribution<double> u(0.1, 1.0);
    CMat q = random_unitary(d, rng);
    CMat diag = CMat::Zero(d, d);
    double tr = 0;
    for (int i = 0; i < rank; ++i) {
        double w = u(rng);
        diag(i, i) = w;
        tr += w;
    }
    if (tr > 0) diag /= tr;
    return q * diag * q.adjoint();
}

std::vector<CMat> random_pvm(int d, Rng& rng) {
    std::uniform_int_distribution<int> pick(2, std::max(2, d));
    int blocks = (d == 1) ? 1 : std::min(d, pick(rng));
    // Random composition of d into `blocks` positive parts.
    std::vector<int> sizes(blocks, 1);
    std::uniform_int_distribution<int> which(0, blocks - 1);
    for (int r = blocks; r < d; ++r) sizes[which(rng)] += 1;
    CMat u = random_unitary(d, rng);
    std::vector<CMat> pvm;
    int at = 0;
    for (int k = 0; k < blocks; ++k) {
        CMat diag = CMat::Zero(d, d);
        for (int i = 0; i < sizes[k]; ++i) diag(at + i, at + i) = 1.0;
        at += sizes[k];
        pvm.push_back(u * diag * u.adjoint());
    }
    return pvm;
}

}  // namespace effalg
