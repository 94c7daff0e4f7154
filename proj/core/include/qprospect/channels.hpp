// channels.hpp: the multichannel measurement pipeline.
//
// A system state rho_B is coupled to a finite-dimensional measurer (compose),
// evolved unitarily under the system-measurer Hamiltonian (evolve), read out
// by replacing the joint state with the product of its partial traces
// (readout), rotated into the eigenbasis of the next observable (transform),
// and finally reduced to the system: rho_A = Tr_M rho_AM.

#pragma once

#include "qprospect/amplitudes.hpp"
#include "qprospect/composite.hpp"
#include "qprospect/events.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qprospect {

/// Pointer-like measurer: initial state and the Hermitian coupling on system (x) measurer.
struct MeasurerSpec {
    DensityOperator initial_state;
    ComplexMatrix coupling;

    Index dim() const noexcept { return initial_state.dim(); }
};

enum class StageKind { Compose, Evolve, Readout, Transform };

const char* to_string(StageKind kind) noexcept;

struct PipelineStage {
    StageKind kind = StageKind::Compose;
    /// Evolve only; time in units with hbar = 1.
    double duration = 0.0;
    /// Transform only; unitary on the system factor.
    ComplexMatrix basis_transform;

    static PipelineStage compose();
    static PipelineStage evolve(double duration);
    static PipelineStage readout();
    static PipelineStage transform(ComplexMatrix t_ab);
};

/// Default basis transformation between two observables' eigenbases, E_A^+ E_B.
ComplexMatrix default_basis_transform(const Observable& obs_a, const Observable& obs_b);

struct StageRecord {
    StageKind kind;
    double time = 0.0;
    DensityOperator joint;
};

struct PipelineTrace {
    std::vector<StageRecord> stages;
    DensityOperator system;    // rho_A = Tr_M of the final joint state
    DensityOperator measurer;  // Tr_S of the final joint state
};

/// rho_B (x) rho_M.
DensityOperator compose(const DensityOperator& rho_b, const MeasurerSpec& measurer);

/// U rho U^+ with U = exp(-i H t).
DensityOperator evolve(const DensityOperator& rho_joint, const ComplexMatrix& hamiltonian, double t);

/// (Tr_M rho, Tr_S rho).
std::pair<DensityOperator, DensityOperator> readout(const DensityOperator& rho_joint, Dims dims);

/// T rho T^+.
DensityOperator transform_basis(const DensityOperator& rho, const ComplexMatrix& t_ab);

PipelineTrace run_pipeline(const DensityOperator& rho_b, const MeasurerSpec& measurer,
                           const std::vector<PipelineStage>& stages);

/// Pure composite state with rho^{ab}_{mn} = c_{m a} c*_{n b}. Requires
/// sum |c|^2 = 1 within the operator tolerance.
CompositeState composite_state_from_correlation(const AmplitudeMatrix& c);

}  // namespace qprospect
