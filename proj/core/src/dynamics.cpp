#include "qprospect/dynamics.hpp"

#include "qprospect/numeric.hpp"

#include <cmath>
#include <sstream>

namespace qprospect {

HamiltonianSpec::HamiltonianSpec(ComplexMatrix h0, std::vector<PotentialPiece> pieces)
    : h0_(std::move(h0)), pieces_(std::move(pieces)) {
    require_hermitian(h0_, "H0");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!std::isfinite(p.start)) throw ValidationError("finite entries", "V(t): non-finite time tag");
        if (i > 0 && !(p.start > pieces_[i - 1].start)) {
            throw ValidationError("increasing time tags", "V(t): time tags must be strictly increasing");
        }
        if (p.v.rows() != h0_.rows() || p.v.cols() != h0_.cols()) {
            throw ShapeError("V(t): piece " + std::to_string(i) + " does not match H0");
        }
        require_hermitian(p.v, "V(t) piece");
    }
}

ComplexMatrix HamiltonianSpec::at(double t) const {
    ComplexMatrix h = h0_;
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
        if (t >= it->start) {
            h += it->v;
            break;
        }
    }
    return h;
}

WaveState::WaveState(ComplexVector coefficients, double time) : c_(std::move(coefficients)), time_(time) {
    if (c_.size() == 0) throw ShapeError("wave state: empty");
    require_finite(c_, "wave state");
    if (!std::isfinite(time_)) throw ValidationError("finite entries", "wave state: time");
    const double n2 = c_.squaredNorm();
    if (std::abs(n2 - 1.0) > tolerance::kWaveNorm) {
        std::ostringstream os;
        os.precision(17);
        os << "wave state: norm^2 " << n2 << " is not 1";
        throw ValidationError("unit norm", os.str());
    }
}

ComplexMatrix propagator(const HamiltonianSpec& h, double t0, double t) {
    if (!std::isfinite(t0) || !std::isfinite(t)) throw ValidationError("finite entries", "propagator: time");
    if (t < t0) throw ValidationError("forward time", "propagator: t must not precede t0");
    // Breakpoints strictly inside (t0, t).
    std::vector<double> cuts{t0};
    for (const auto& p : h.pieces())
        if (p.start > t0 && p.start < t) cuts.push_back(p.start);
    cuts.push_back(t);

    ComplexMatrix u = identity(h.dim());
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double dt = cuts[i] - cuts[i - 1];
        if (dt <= 0.0) continue;
        u = (matrix_exponential(h.at(cuts[i - 1]), dt) * u).eval();
    }
    return u;
}

WaveState evolve_state(const WaveState& psi0, const HamiltonianSpec& h, double t) {
    if (psi0.dim() != h.dim()) throw ShapeError("evolve_state: dimension mismatch");
    if (t < psi0.time()) throw ValidationError("forward time", "evolve_state: backward time");
    return WaveState(propagator(h, psi0.time(), t) * psi0.coefficients(), t);
}

TwoTimeAmplitudes amplitude_matrix(const WaveState& psi0, const HamiltonianSpec& h, double t0, double t) {
    if (!(t > t0)) throw ValidationError("time order", "amplitude_matrix: requires t0 < t");
    const WaveState at_t0 = evolve_state(psi0, h, t0);
    const ComplexMatrix u = propagator(h, t0, t);
    const ComplexVector& c0 = at_t0.coefficients();

    ComplexMatrix c = u * c0.asDiagonal();
    const ComplexVector ct = u * c0;
    AmplitudeMatrix amp(std::move(c), t0, t);
    RealVector residual = amp.row_norms() - ct.cwiseAbs2();
    return TwoTimeAmplitudes{std::move(amp), std::move(residual)};
}

double two_time_joint(const AmplitudeMatrix& c, Index n, Index alpha) {
    if (n < 0 || n >= c.rows() || alpha < 0 || alpha >= c.cols()) {
        throw IndexError("two_time_joint: index (" + std::to_string(n) + "," + std::to_string(alpha) +
                         ") out of range");
    }
    return checked_probability(std::norm(c.c()(n, alpha)), "two_time_joint");
}

ProspectProbability two_time_prospect(const AmplitudeMatrix& c, Index n, const ComplexVector& b) {
    if (n < 0 || n >= c.rows()) throw IndexError("two_time_prospect: index out of range");
    if (b.size() != c.cols()) throw ShapeError("two_time_prospect: multimode dimension mismatch");
    const auto row = c.c().row(n);
    double f = 0.0;
    Complex q{0.0, 0.0};
    for (Index a = 0; a < b.size(); ++a) {
        f += std::norm(b(a)) * std::norm(row(a));
        for (Index bb = 0; bb < b.size(); ++bb) {
            if (bb != a) q += std::conj(b(a)) * b(bb) * row(a) * std::conj(row(bb));
        }
    }
    if (std::abs(q.imag()) > tolerance::kProbability * std::max(1.0, b.squaredNorm())) {
        throw NumericError("two_time_prospect: interference term is not real");
    }
    return {f + q.real(), f, q.real()};
}

}  // namespace qprospect
