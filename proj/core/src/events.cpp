#include "qprospect/events.hpp"

#include "qprospect/numeric.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qprospect {

namespace {

void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

// -- DensityOperator ---------------------------------------------------------

DensityOperator::DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    require_hermitian(matrix_, "density operator");
    const double tol = tolerance::operator_tolerance();
    const Complex tr = matrix_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
        std::ostringstream os;
        os.precision(17);
        os << "density operator: trace " << tr.real() << " is not 1";
        throw ValidationError("unit trace", os.str());
    }
    if (hermitian_eigenvalues(matrix_).minCoeff() < -tol) {
        throw ValidationError("PSD", "density operator: negative eigenvalue");
    }
}

DensityOperator DensityOperator::from_pure(const ComplexVector& psi) {
    if (psi.size() == 0) throw ShapeError("from_pure: empty state vector");
    require_finite(psi, "from_pure");
    const double n2 = psi.squaredNorm();
    if (n2 <= 0.0) throw ValidationError("nonzero vector", "from_pure: zero state vector");
    ComplexMatrix m = outer(psi, psi) / n2;
    m = 0.5 * (m + m.adjoint()).eval();
    return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
    if (dim <= 0) throw ShapeError("maximally_mixed: dimension must be positive");
    return DensityOperator(identity(dim) / static_cast<double>(dim));
}

double DensityOperator::purity() const {
    return (matrix_ * matrix_).trace().real();
}

// -- Observable --------------------------------------------------------------

Observable::Observable(std::string label, std::vector<double> eigenvalues, ComplexMatrix eigenbasis)
    : label_(std::move(label)), eigenvalues_(std::move(eigenvalues)), basis_(std::move(eigenbasis)) {
    require_square(basis_, "observable eigenbasis");
    require_finite(basis_, "observable eigenbasis");
    if (static_cast<Index>(eigenvalues_.size()) != basis_.cols()) {
        throw ShapeError("observable '" + label_ + "': " + std::to_string(eigenvalues_.size()) +
                         " eigenvalues for a " + std::to_string(basis_.cols()) + "-dim basis");
    }
    for (double v : eigenvalues_) {
        if (!std::isfinite(v)) {
            throw ValidationError("finite entries", "observable '" + label_ + "': eigenvalue");
        }
    }
    const double ortho = (basis_.adjoint() * basis_ - identity(basis_.cols())).cwiseAbs().maxCoeff();
    if (ortho > tolerance::operator_tolerance()) {
        std::ostringstream os;
        os << "observable '" << label_ << "': eigenbasis not orthonormal (residual " << ortho << ")";
        throw ValidationError("orthonormal basis", os.str());
    }
    std::vector<double> sorted = eigenvalues_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] - sorted[i - 1] <= tolerance::kSpectralGap) {
            throw ValidationError("nondegenerate spectrum",
                                  "observable '" + label_ + "': degenerate eigenvalues");
        }
    }
}

Observable Observable::computational(Index dim, std::string label) {
    if (dim <= 0) throw ShapeError("computational: dimension must be positive");
    std::vector<double> ev(static_cast<std::size_t>(dim));
    for (Index k = 0; k < dim; ++k) ev[static_cast<std::size_t>(k)] = static_cast<double>(k);
    return Observable(std::move(label), std::move(ev), identity(dim));
}

Observable Observable::from_matrix(std::string label, const ComplexMatrix& operator_matrix) {
    require_hermitian(operator_matrix, "observable operator");
    const Eigen::MatrixXcd hs = 0.5 * (operator_matrix + operator_matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs);
    if (es.info() != Eigen::Success) throw NumericError("from_matrix: eigensolver failed");
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return Observable(std::move(label), std::move(ev), es.eigenvectors());
}

ComplexVector Observable::eigenvector(Index n) const {
    if (n < 0 || n >= dim()) {
        throw IndexError("observable '" + label_ + "': index " + std::to_string(n) +
                         " out of range [0," + std::to_string(dim()) + ")");
    }
    return basis_.col(n);
}

ComplexMatrix Observable::operator_matrix() const {
    RealVector ev = Eigen::Map<const RealVector>(eigenvalues_.data(), dim());
    return basis_ * ev.cast<Complex>().asDiagonal() * basis_.adjoint();
}

bool operator==(const Observable& a, const Observable& b) {
    return a.label_ == b.label_ && a.eigenvalues_ == b.eigenvalues_ &&
           a.basis_.rows() == b.basis_.rows() && a.basis_.cols() == b.basis_.cols() &&
           a.basis_ == b.basis_;
}

// -- Projector ---------------------------------------------------------------

Projector projector_of(const Observable& obs, Index n) {
    const ComplexVector v = obs.eigenvector(n);
    return Projector(outer(v, v), EventId{obs.label(), n});
}

// -- MultimodeState / GeneralizedProposition / PovmFamily ---------------------

MultimodeState::MultimodeState(ComplexVector coefficients, Observable basis)
    : coefficients_(std::move(coefficients)), basis_(std::move(basis)) {
    require_finite(coefficients_, "multimode coefficients");
    require_same_dim(coefficients_.size(), basis_.dim(), "multimode state");
}

ComplexVector MultimodeState::ket() const {
    return basis_.eigenbasis() * coefficients_;
}

GeneralizedProposition::GeneralizedProposition(const MultimodeState& b)
    : GeneralizedProposition(b.ket()) {}

GeneralizedProposition::GeneralizedProposition(const ComplexVector& ket) : ket_(ket) {
    if (ket_.size() == 0) throw ShapeError("generalized proposition: empty vector");
    require_finite(ket_, "generalized proposition");
    matrix_ = outer(ket_, ket_);
}

PovmFamily::PovmFamily(std::vector<GeneralizedProposition> members) : members_(std::move(members)) {
    if (members_.empty()) throw ValidationError("nonempty family", "POVM family is empty");
    for (const auto& m : members_) require_same_dim(m.dim(), members_.front().dim(), "POVM family");
}

// -- probabilities -----------------------------------------------------------

MultimodeProbability multimode_probability(const DensityOperator& rho, const MultimodeState& b) {
    require_same_dim(rho.dim(), b.dim(), "multimode_probability");
    const ComplexMatrix& e = b.basis().eigenbasis();
    const ComplexMatrix r = e.adjoint() * rho.matrix() * e;  // <alpha|rho|beta>
    const ComplexVector& c = b.coefficients();

    const Complex total = c.dot(r * c);  // conjugates the first argument
    double classical = 0.0;
    Complex half_cross{0.0, 0.0};
    for (Index a = 0; a < c.size(); ++a) {
        classical += std::norm(c(a)) * r(a, a).real();
        for (Index bb = a + 1; bb < c.size(); ++bb) half_cross += std::conj(c(a)) * c(bb) * r(a, bb);
    }
    const double quantum = 2.0 * half_cross.real();

    const double scale = std::max(1.0, b.norm_squared());
    if (std::abs(total.imag()) > tolerance::kProbability * scale) {
        throw NumericError("multimode_probability: imaginary residue in p(B)");
    }
    if (std::abs(total.real() - classical - quantum) > tolerance::kProbability * scale) {
        throw NumericError("multimode_probability: p != classical + quantum");
    }
    if (total.real() < -tolerance::kProbability * scale) {
        throw NumericError("multimode_probability: negative p(B)");
    }
    return {total.real(), classical, quantum};
}

namespace {

PovmReport povm_residual(const PovmFamily& family) {
    ComplexMatrix sum = ComplexMatrix::Zero(family.dim(), family.dim());
    for (const auto& m : family.members()) sum += m.matrix();
    PovmReport report;
    report.residual = (sum - identity(family.dim())).cwiseAbs().maxCoeff();
    report.passed = report.residual <= tolerance::kPovm;
    return report;
}

}  // namespace

PovmReport validate_povm(const PovmFamily& family) {
    return povm_residual(family);
}

PovmReport validate_povm(const PovmFamily& family, const DensityOperator& rho) {
    require_same_dim(rho.dim(), family.dim(), "validate_povm");
    PovmReport report = povm_residual(family);
    double total = 0.0;
    for (const auto& m : family.members()) total += (rho.matrix() * m.matrix()).trace().real();
    report.total_probability = total;
    return report;
}

}  // namespace qprospect
