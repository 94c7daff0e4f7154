// dynamics.hpp: multimode Schroedinger evolution and two-time composite events.
//
// H(t) = H0 + V(t) with V piecewise constant. Each constant piece is
// propagated exactly with exp(-i H dt), so no integrator tolerance enters.
// Coefficients c_n(t) are taken over the eigenmodes of H0, i.e. H0 is given
// in its own eigenbasis (it need not be diagonal, but the modes |n> are the
// coordinate axes).

#pragma once

#include "qprospect/amplitudes.hpp"
#include "qprospect/composite.hpp"

#include <vector>

namespace qprospect {

/// V(t) = pieces[i].v for pieces[i].start <= t < pieces[i+1].start; V = 0 before the first tag.
struct PotentialPiece {
    double start = 0.0;
    ComplexMatrix v;
};

class HamiltonianSpec {
public:
    explicit HamiltonianSpec(ComplexMatrix h0, std::vector<PotentialPiece> pieces = {});

    const ComplexMatrix& h0() const noexcept { return h0_; }
    const std::vector<PotentialPiece>& pieces() const noexcept { return pieces_; }
    Index dim() const noexcept { return h0_.rows(); }

    /// H0 + V(t).
    ComplexMatrix at(double t) const;

private:
    ComplexMatrix h0_;
    std::vector<PotentialPiece> pieces_;
};

/// |psi(t)> = sum_n c_n |n>, unit norm within tolerance::kWaveNorm.
class WaveState {
public:
    WaveState(ComplexVector coefficients, double time = 0.0);

    const ComplexVector& coefficients() const noexcept { return c_; }
    double time() const noexcept { return time_; }
    Index dim() const noexcept { return c_.size(); }

private:
    ComplexVector c_;
    double time_;
};

/// U(t, t0) for the piecewise-constant Hamiltonian, t >= t0.
ComplexMatrix propagator(const HamiltonianSpec& h, double t0, double t);

WaveState evolve_state(const WaveState& psi0, const HamiltonianSpec& h, double t);

struct TwoTimeAmplitudes {
    AmplitudeMatrix c;
    /// sum_alpha |c(n, alpha)|^2 - |c_n(t)|^2 for each n. Reported, not asserted.
    RealVector row_residual;
};

/// c(n, alpha) = <n|U(t, t0)|alpha> c_alpha(t0), with c(t0) obtained by
/// evolving psi0 to t0. Requires psi0.time() <= t0 < t.
TwoTimeAmplitudes amplitude_matrix(const WaveState& psi0, const HamiltonianSpec& h, double t0, double t);

/// p(A_n (x) B_alpha) = |c(n, alpha)|^2.
double two_time_joint(const AmplitudeMatrix& c, Index n, Index alpha);

/// f = sum_a |b_a|^2 |c_na|^2, q = sum_{a != b} b*_a b_b c_na c*_nb.
ProspectProbability two_time_prospect(const AmplitudeMatrix& c, Index n, const ComplexVector& b);

}  // namespace qprospect
