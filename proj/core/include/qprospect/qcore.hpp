// qcore.hpp: dense complex linear algebra shared by every module.
//
// Composite spaces use the |n alpha> ordering: the A-factor index is the slow
// (outer) index, so element (n, alpha) of H_A (x) H_B sits at n * dim_B + alpha.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace qprospect {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Largest dimension of any matrix the library will build.
inline constexpr Index kMaxDimension = 4096;

/// Factor dimensions of a bipartite space H_A (x) H_B.
struct Dims {
    Index a = 0;
    Index b = 0;

    Index total() const noexcept { return a * b; }
    friend bool operator==(const Dims&, const Dims&) = default;
};

enum class Factor { A, B };

// -- validation helpers ------------------------------------------------------

bool all_finite(const ComplexMatrix& m) noexcept;
void require_finite(const ComplexMatrix& m, const char* what);
void require_square(const ComplexMatrix& m, const char* what);

/// max |m - m^dagger|.
double hermitian_residual(const ComplexMatrix& m);
/// max |u u^dagger - I|.
double unitarity_residual(const ComplexMatrix& u);
void require_hermitian(const ComplexMatrix& m, const char* what);
void require_unitary(const ComplexMatrix& u, const char* what);

/// Maximum absolute entrywise difference.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// -- kernel operations -------------------------------------------------------

/// Kronecker product a (x) b; rows of `a` are the slow index.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace out one factor of a (dims.a * dims.b)-square matrix, keeping `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Factor keep);

/// U = exp(-i h t) for Hermitian h, via eigendecomposition.
ComplexMatrix matrix_exponential(const ComplexMatrix& h, double t);

/// Ascending eigenvalues of a Hermitian matrix.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

/// Spectral norm of a Hermitian PSD matrix, i.e. its largest eigenvalue.
double spectral_norm(const ComplexMatrix& m);

ComplexMatrix identity(Index dim);
ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra);

}  // namespace qprospect
