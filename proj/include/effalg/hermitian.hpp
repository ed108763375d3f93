#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "effalg/report.hpp"

namespace effalg {

using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct Tolerances {
    double eps_eq = 1e-9;   // matrix equalities, operator norm
    double eps_psd = 1e-9;  // allowed negative part of eigenvalues
};

// Operator norm (largest singular value); exact spectral norm for Hermitians.
double opnorm(const CMat& a);
double opnorm_real(const RMat& a);

// Smallest eigenvalue of a (symmetrized) Hermitian matrix.
double min_eig(const CMat& a);

bool is_hermitian(const CMat& a, double eps);
// Effect: Hermitian with spectrum inside [-eps, 1+eps].
bool is_effect(const CMat& a, double eps);

CMat jordan_product(const CMat& a, const CMat& b);          // (ab + ba)/2
CMat triple_product(const CMat& a, const CMat& b, const CMat& c); // (abc + cba)/2

// Orthonormal basis of d x d Hermitian matrices under <x,y> = tr(xy):
// unit diagonals E_ii, then (E_ij + E_ji)/sqrt(2), then i(E_ij - E_ji)/sqrt(2)
// for i < j in row-major pair order.
class HermitianBasis {
  public:
    explicit HermitianBasis(int d);

    int d() const { return d_; }
    int dim() const { return d_ * d_; }
    const CMat& element(int k) const { return elems_[k]; }

    RVec coords(const CMat& a) const;   // real coefficients, length d^2
    CMat matrix(const RVec& v) const;

  private:
    int d_;
    std::vector<CMat> elems_;
};

// Real-linear map on Hermitian d x d matrices stored as its d^2 x d^2 matrix
// in the basis above.
struct HermitianMap {
    int d = 0;
    RMat action; // d^2 x d^2

    CMat apply(const CMat& a) const;
    HermitianMap compose(const HermitianMap& inner) const; // this after inner
    HermitianMap adjoint() const;                          // trace adjoint

    static HermitianMap identity(int d);
    static HermitianMap from_function(int d, const std::function<CMat(const CMat&)>& f);
};

const HermitianBasis& basis_for(int d); // cached per dimension

// Seeded generators (deterministic for a fixed seed and platform).
using Rng = std::mt19937_64;
CMat random_hermitian(int d, Rng& rng);            // Gaussian entries, norm O(1)
CMat random_unitary(int d, Rng& rng);              // QR of a Gaussian matrix
CMat random_effect(int d, Rng& rng);               // spectrum uniform in [0,1]
CMat random_psd(int d, Rng& rng, int rank = -1);   // unit trace
std::vector<CMat> random_pvm(int d, Rng& rng);     // random sizes, >= 2 blocks when d > 1

}  // namespace effalg
