#include "qprospect/entangle.hpp"

#include "qprospect/numeric.hpp"

#include <cmath>

namespace qprospect {

namespace {

double max_diagonal(const ComplexMatrix& m) {
    return m.diagonal().real().maxCoeff();
}

double log_in(LogBase base, double x) {
    return base == LogBase::Two ? std::log2(x) : std::log(x);
}

double ratio_log(const NormTriple& n, LogBase base) {
    if (n.a <= 0.0 || n.b <= 0.0 || n.ab <= 0.0) {
        throw NumericError("entanglement_production: vanishing norm");
    }
    return log_in(base, n.ab / (n.a * n.b));
}

}  // namespace

const char* unit_name(LogBase base) noexcept {
    return base == LogBase::Two ? "bits" : "nats";
}

EntanglementReport entanglement_production(const CompositeState& rho, LogBase base) {
    const ComplexMatrix ra = rho.reduced_a();
    const ComplexMatrix rb = rho.reduced_b();

    EntanglementReport r;
    r.base = base;
    r.basis = NormTriple{max_diagonal(rho.matrix()), max_diagonal(ra), max_diagonal(rb)};
    r.spectral = NormTriple{spectral_norm(rho.matrix()), spectral_norm(ra), spectral_norm(rb)};
    r.epsilon = ratio_log(r.basis, base);
    r.epsilon_spectral = ratio_log(r.spectral, base);
    return r;
}

CompositeState bell_state(Index modes) {
    if (modes < 2) {
        throw ValidationError("at least two modes", "bell_state: M must be >= 2, got " + std::to_string(modes));
    }
    ComplexMatrix c = ComplexMatrix::Zero(modes, modes);
    for (Index k = 0; k < modes; ++k) c(k, k) = 1.0 / std::sqrt(static_cast<double>(modes));
    return CompositeState::from_amplitudes(c);
}

}  // namespace qprospect
