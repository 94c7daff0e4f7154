// measure.hpp: measurement calculus on a single Hilbert space.
//
// Born probabilities, expectation values, Lueders reduction, Lueders
// transition probabilities, Wigner distributions, Kirkwood forms and the
// residual of the identity chain p(A_n) = sum_a p_W(A_n|B_a) + sum_{a!=b} <P_a P_n P_b>.
//
// Probabilities are checked against [-1e-12, 1 + 1e-12] and only then clamped;
// anything further out raises NumericError.

#pragma once

#include "qprospect/events.hpp"

#include <vector>

namespace qprospect {

struct MeasurementOutcome {
    EventId event;
    double probability = 0.0;
    DensityOperator post_state;
};

double born_probability(const DensityOperator& rho, const Observable& obs, Index n);
/// p(A_n) for every n.
std::vector<double> born_distribution(const DensityOperator& rho, const Observable& obs);

double expected_value(const DensityOperator& rho, const Observable& obs);

/// argmax_n p(A_n); ties go to the lowest index.
Index most_probable(const DensityOperator& rho, const Observable& obs);

/// p of a union of distinct events of one observable. Duplicates are rejected
/// (A u A = A, so summing would double count).
double disjoint_union_probability(const DensityOperator& rho, const Observable& obs,
                                  const std::vector<Index>& indices);

/// P_n rho P_n / Tr(rho P_n). Throws NumericError when p(A_n) <= 1e-12.
DensityOperator luders_reduce(const DensityOperator& rho, const Observable& obs, Index n);

/// Probability and post-state of outcome n in one call.
MeasurementOutcome measure(const DensityOperator& rho, const Observable& obs, Index n);

/// p_L(A_n|B_alpha) = |<n|alpha>|^2.
double luders_transition(const Observable& obs_a, Index n, const Observable& obs_b, Index alpha);
/// Full table T(n, alpha) = p_L(A_n|B_alpha).
RealMatrix luders_transition_table(const Observable& obs_a, const Observable& obs_b);

/// p_W(A_n|B_alpha) = Tr(rho P_alpha P_n P_alpha).
double wigner_distribution(const DensityOperator& rho, const Observable& obs_a, Index n,
                           const Observable& obs_b, Index alpha);

/// <P_n P_alpha> = Tr(rho P_n P_alpha); complex for incompatible observables.
Complex kirkwood_form(const DensityOperator& rho, const Observable& obs_a, Index n,
                      const Observable& obs_b, Index alpha);

/// |p(A_n) - sum_alpha p_W(A_n|B_alpha) - sum_{alpha != beta} <P_alpha P_n P_beta>|,
/// every term evaluated as an explicit operator trace.
double identity_chain_residual(const DensityOperator& rho, const Observable& obs_a, Index n,
                               const Observable& obs_b);

}  // namespace qprospect
