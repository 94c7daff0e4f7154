#include "qprospect/channels.hpp"

#include "qprospect/numeric.hpp"

#include <cmath>
#include <optional>

namespace qprospect {

namespace {

ComplexMatrix hermitize(const ComplexMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

}  // namespace

const char* to_string(StageKind kind) noexcept {
    switch (kind) {
        case StageKind::Compose: return "compose";
        case StageKind::Evolve: return "evolve";
        case StageKind::Readout: return "readout";
        case StageKind::Transform: return "transform";
    }
    return "unknown";
}

PipelineStage PipelineStage::compose() {
    return PipelineStage{StageKind::Compose, 0.0, {}};
}

PipelineStage PipelineStage::evolve(double duration) {
    return PipelineStage{StageKind::Evolve, duration, {}};
}

PipelineStage PipelineStage::readout() {
    return PipelineStage{StageKind::Readout, 0.0, {}};
}

PipelineStage PipelineStage::transform(ComplexMatrix t_ab) {
    return PipelineStage{StageKind::Transform, 0.0, std::move(t_ab)};
}

ComplexMatrix default_basis_transform(const Observable& obs_a, const Observable& obs_b) {
    if (obs_a.dim() != obs_b.dim()) throw ShapeError("default_basis_transform: dimension mismatch");
    return obs_a.eigenbasis().adjoint() * obs_b.eigenbasis();
}

DensityOperator compose(const DensityOperator& rho_b, const MeasurerSpec& measurer) {
    return DensityOperator(tensor_product(rho_b.matrix(), measurer.initial_state.matrix()));
}

DensityOperator evolve(const DensityOperator& rho_joint, const ComplexMatrix& hamiltonian, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("non-negative time", "evolve: duration must be finite and >= 0");
    }
    if (hamiltonian.rows() != rho_joint.dim() || hamiltonian.cols() != rho_joint.dim()) {
        throw ShapeError("evolve: Hamiltonian does not act on the joint space");
    }
    const ComplexMatrix u = matrix_exponential(hamiltonian, t);
    return DensityOperator(hermitize(u * rho_joint.matrix() * u.adjoint()));
}

std::pair<DensityOperator, DensityOperator> readout(const DensityOperator& rho_joint, Dims dims) {
    return {DensityOperator(hermitize(partial_trace(rho_joint.matrix(), dims, Factor::A))),
            DensityOperator(hermitize(partial_trace(rho_joint.matrix(), dims, Factor::B)))};
}

DensityOperator transform_basis(const DensityOperator& rho, const ComplexMatrix& t_ab) {
    require_unitary(t_ab, "transform_basis");
    if (t_ab.rows() != rho.dim()) throw ShapeError("transform_basis: dimension mismatch");
    return DensityOperator(hermitize(t_ab * rho.matrix() * t_ab.adjoint()));
}

PipelineTrace run_pipeline(const DensityOperator& rho_b, const MeasurerSpec& measurer,
                           const std::vector<PipelineStage>& stages) {
    const Dims dims{rho_b.dim(), measurer.dim()};
    require_hermitian(measurer.coupling, "measurer coupling");
    if (measurer.coupling.rows() != dims.total()) {
        throw ShapeError("run_pipeline: coupling must act on system (x) measurer");
    }
    if (stages.empty() || stages.front().kind != StageKind::Compose) {
        throw ProtocolError("run_pipeline: the first stage must be compose");
    }

    std::vector<StageRecord> records;
    std::optional<DensityOperator> joint;
    double clock = 0.0;
    // Whether anything has happened since the last compose/readout.
    bool changed = false;

    for (std::size_t i = 0; i < stages.size(); ++i) {
        const PipelineStage& st = stages[i];
        switch (st.kind) {
            case StageKind::Compose:
                if (i != 0) throw ProtocolError("run_pipeline: compose may only be the first stage");
                joint = compose(rho_b, measurer);
                changed = false;
                break;
            case StageKind::Evolve:
                joint = evolve(*joint, measurer.coupling, st.duration);
                clock += st.duration;
                changed = true;
                break;
            case StageKind::Readout: {
                if (!changed) {
                    throw ProtocolError("run_pipeline: readout at stage " + std::to_string(i) +
                                        " does not follow an evolution or transform");
                }
                auto [s, m] = readout(*joint, dims);
                joint = DensityOperator(tensor_product(s.matrix(), m.matrix()));
                changed = false;
                break;
            }
            case StageKind::Transform: {
                if (st.basis_transform.rows() != dims.a) {
                    throw ShapeError("run_pipeline: basis transform must act on the system factor");
                }
                require_unitary(st.basis_transform, "run_pipeline transform");
                joint = transform_basis(*joint, tensor_product(st.basis_transform, identity(dims.b)));
                changed = true;
                break;
            }
        }
        records.push_back(StageRecord{st.kind, clock, *joint});
    }

    auto [system, meter] = readout(*joint, dims);
    return PipelineTrace{std::move(records), std::move(system), std::move(meter)};
}

CompositeState composite_state_from_correlation(const AmplitudeMatrix& c) {
    return CompositeState::from_amplitudes(c.c());
}

}  // namespace qprospect
