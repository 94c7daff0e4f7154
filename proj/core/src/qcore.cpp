#include "qprospect/qcore.hpp"

#include "qprospect/numeric.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <string>

namespace qprospect {

namespace {

using HermitianSolver = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>;

std::string shape_of(const ComplexMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

bool all_finite(const ComplexMatrix& m) noexcept {
    for (Index i = 0; i < m.size(); ++i) {
        const Complex z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

void require_finite(const ComplexMatrix& m, const char* what) {
    if (!all_finite(m)) {
        throw ValidationError("finite entries", std::string(what) + ": non-finite entry");
    }
}

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ShapeError(std::string(what) + ": expected a non-empty square matrix, got " +
                         shape_of(m));
    }
}

double hermitian_residual(const ComplexMatrix& m) {
    require_square(m, "hermitian_residual");
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const ComplexMatrix& u) {
    require_square(u, "unitarity_residual");
    return (u * u.adjoint() - identity(u.rows())).cwiseAbs().maxCoeff();
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
    require_square(m, what);
    require_finite(m, what);
    const double r = hermitian_residual(m);
    if (r > tolerance::operator_tolerance()) {
        std::ostringstream os;
        os << what << ": not Hermitian (max |m - m^+| = " << r << ")";
        throw ValidationError("Hermitian", os.str());
    }
}

void require_unitary(const ComplexMatrix& u, const char* what) {
    require_square(u, what);
    require_finite(u, what);
    const double r = unitarity_residual(u);
    if (r > tolerance::operator_tolerance()) {
        std::ostringstream os;
        os << what << ": not unitary (max |u u^+ - I| = " << r << ")";
        throw ValidationError("unitary", os.str());
    }
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("max_abs_diff: " + shape_of(a) + " vs " + shape_of(b));
    }
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_finite(a, "tensor_product");
    require_finite(b, "tensor_product");
    if (a.rows() * b.rows() > kMaxDimension || a.cols() * b.cols() > kMaxDimension) {
        throw ValidationError("size limit", "tensor_product: result " +
                                                std::to_string(a.rows() * b.rows()) + "x" +
                                                std::to_string(a.cols() * b.cols()) +
                                                " exceeds the size limit");
    }
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Factor keep) {
    require_square(m, "partial_trace");
    if (dims.a <= 0 || dims.b <= 0 || dims.total() != m.rows()) {
        throw ShapeError("partial_trace: dims " + std::to_string(dims.a) + "x" +
                         std::to_string(dims.b) + " do not match a " + shape_of(m) + " matrix");
    }
    if (keep == Factor::A) {
        ComplexMatrix out = ComplexMatrix::Zero(dims.a, dims.a);
        for (Index m1 = 0; m1 < dims.a; ++m1)
            for (Index n1 = 0; n1 < dims.a; ++n1)
                for (Index k = 0; k < dims.b; ++k)
                    out(m1, n1) += m(m1 * dims.b + k, n1 * dims.b + k);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(dims.b, dims.b);
    for (Index k = 0; k < dims.a; ++k)
        out += m.block(k * dims.b, k * dims.b, dims.b, dims.b);
    return out;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& h, double t) {
    require_hermitian(h, "matrix_exponential");
    if (!std::isfinite(t)) throw ValidationError("finite entries", "matrix_exponential: t");
    // Symmetrise so the solver sees an exactly Hermitian input.
    const Eigen::MatrixXcd hs = 0.5 * (h + h.adjoint());
    HermitianSolver es(hs);
    if (es.info() != Eigen::Success) throw NumericError("matrix_exponential: eigensolver failed");
    Eigen::VectorXcd phases(hs.rows());
    for (Index k = 0; k < hs.rows(); ++k) {
        phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * t));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
    require_hermitian(m, "hermitian_eigenvalues");
    const Eigen::MatrixXcd ms = 0.5 * (m + m.adjoint());
    HermitianSolver es(ms, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("hermitian_eigenvalues: eigensolver failed");
    return es.eigenvalues();
}

double spectral_norm(const ComplexMatrix& m) {
    require_square(m, "spectral_norm");
    const RealVector ev = hermitian_eigenvalues(m);
    if (ev.minCoeff() < -tolerance::operator_tolerance()) {
        throw ValidationError("PSD", "spectral_norm: matrix is not positive semidefinite");
    }
    return ev.cwiseAbs().maxCoeff();
}

ComplexMatrix identity(Index dim) {
    return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra) {
    return ket * bra.adjoint();
}

}  // namespace qprospect
