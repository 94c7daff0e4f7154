// entangle.hpp: entanglement production and generalized Bell states.
//
//   eps(rho_AB) = log( ||rho_AB|| / (||rho_A|| ||rho_B||) ),
//   rho_A = Tr_B rho_AB,  rho_B = Tr_A rho_AB.
//
// Two norm evaluations are reported. `basis` takes each norm as the largest
// diagonal element in the |n alpha>, |n>, |alpha> bases; this is the
// evaluation under which a generalized Bell state of M modes gives
// eps = log M. `spectral` uses the largest eigenvalue. The two agree whenever
// all three operators are diagonal in those bases; for the pure Bell state
// ||rho_AB||_spectral = 1 and the spectral value is 2 log M.

#pragma once

#include "qprospect/composite.hpp"

namespace qprospect {

enum class LogBase { Natural, Two };

const char* unit_name(LogBase base) noexcept;

struct NormTriple {
    double ab = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct EntanglementReport {
    double epsilon = 0.0;           // from `basis`
    double epsilon_spectral = 0.0;  // from `spectral`
    NormTriple basis;
    NormTriple spectral;
    LogBase base = LogBase::Natural;
};

EntanglementReport entanglement_production(const CompositeState& rho, LogBase base = LogBase::Natural);

/// (1/M) sum_{mn} |mm><nn|, i.e. amplitudes c(n, alpha) = delta_{n alpha} / sqrt(M).
CompositeState bell_state(Index modes);

}  // namespace qprospect
