// events.hpp: states, observables, projectors, multimode states and POVM
// families, each validated at construction.

#pragma once

#include "qprospect/qcore.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qprospect {

/// Trace-one Hermitian positive semidefinite operator.
class DensityOperator {
public:
    /// Validates Hermiticity, unit trace and PSD against the operator tolerance.
    explicit DensityOperator(ComplexMatrix matrix);

    /// |psi><psi| / <psi|psi>.
    static DensityOperator from_pure(const ComplexVector& psi);
    static DensityOperator maximally_mixed(Index dim);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    Index dim() const noexcept { return matrix_.rows(); }
    /// Tr rho^2.
    double purity() const;

private:
    ComplexMatrix matrix_;
};

/// Events are identified by (observable label, eigen-index), never by eigenvalue.
struct EventId {
    std::string observable;
    Index index = 0;

    friend bool operator==(const EventId&, const EventId&) = default;
};

/// Hermitian operator with a nondegenerate spectrum, stored as eigenvalues and
/// an orthonormal eigenbasis whose columns are the eigenvectors |n>.
class Observable {
public:
    Observable(std::string label, std::vector<double> eigenvalues, ComplexMatrix eigenbasis);

    /// Eigenbasis = identity, eigenvalues 0, 1, ..., dim-1.
    static Observable computational(Index dim, std::string label = "computational");
    /// Diagonalises a Hermitian matrix; rejects degenerate spectra.
    static Observable from_matrix(std::string label, const ComplexMatrix& operator_matrix);

    const std::string& label() const noexcept { return label_; }
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    const ComplexMatrix& eigenbasis() const noexcept { return basis_; }
    Index dim() const noexcept { return basis_.rows(); }

    /// Column n of the eigenbasis.
    ComplexVector eigenvector(Index n) const;
    /// Sum_n A_n |n><n|.
    ComplexMatrix operator_matrix() const;

    friend bool operator==(const Observable& a, const Observable& b);

private:
    std::string label_;
    std::vector<double> eigenvalues_;
    ComplexMatrix basis_;
};

/// Rank-one projector |n><n| of an observable.
class Projector {
public:
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const EventId& source() const noexcept { return source_; }

private:
    friend Projector projector_of(const Observable& obs, Index n);
    Projector(ComplexMatrix m, EventId source) : matrix_(std::move(m)), source_(std::move(source)) {}

    ComplexMatrix matrix_;
    EventId source_;
};

Projector projector_of(const Observable& obs, Index n);

/// |B> = sum_alpha b_alpha |alpha> over the eigenbasis of `basis`.
/// Not required to be normalised.
class MultimodeState {
public:
    MultimodeState(ComplexVector coefficients, Observable basis);

    const ComplexVector& coefficients() const noexcept { return coefficients_; }
    const Observable& basis() const noexcept { return basis_; }
    Index dim() const noexcept { return coefficients_.size(); }

    /// The vector |B> in the ambient (computational) coordinates.
    ComplexVector ket() const;
    double norm_squared() const { return coefficients_.squaredNorm(); }

private:
    ComplexVector coefficients_;
    Observable basis_;
};

/// P_B = |B><B|. Idempotent only when <B|B> = 1; in general P_B^2 = <B|B> P_B.
class GeneralizedProposition {
public:
    explicit GeneralizedProposition(const MultimodeState& b);
    explicit GeneralizedProposition(const ComplexVector& ket);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const ComplexVector& ket() const noexcept { return ket_; }
    Index dim() const noexcept { return matrix_.rows(); }

private:
    ComplexVector ket_;
    ComplexMatrix matrix_;
};

/// A user-declared finite family of generalised propositions. Construction
/// checks only non-emptiness and a common dimension; whether the family
/// resolves the identity is what validate_povm reports.
class PovmFamily {
public:
    explicit PovmFamily(std::vector<GeneralizedProposition> members);

    const std::vector<GeneralizedProposition>& members() const noexcept { return members_; }
    Index dim() const noexcept { return members_.front().dim(); }

private:
    std::vector<GeneralizedProposition> members_;
};

/// p(B) split into its diagonal (classical) and off-diagonal (interference) parts.
struct MultimodeProbability {
    double p = 0.0;
    double classical = 0.0;
    double quantum = 0.0;
};

MultimodeProbability multimode_probability(const DensityOperator& rho, const MultimodeState& b);

struct PovmReport {
    /// max |sum_B P_B - I|.
    double residual = 0.0;
    bool passed = false;
    /// sum_B p(B) for the supplied state, if one was given.
    std::optional<double> total_probability;
};

PovmReport validate_povm(const PovmFamily& family);
PovmReport validate_povm(const PovmFamily& family, const DensityOperator& rho);

}  // namespace qprospect
