// composite.hpp: composite events on H_A (x) H_B and prospects under uncertainty.
//
// A composite state is written in the |n alpha> basis, where |n> are the
// eigenvectors of the A-side observable and |alpha> those of the B-side one.
// Element rho^{alpha beta}_{m n} = <m alpha| rho_AB |n beta>.
//
// A prospect pi_n = A_n (x) B pairs an operationally testable event A_n with
// an uncertain B-side event |B> = sum_alpha b_alpha |alpha>. Its probability
// splits as p = f + q: f collects the alpha == beta terms, q the interference.

#pragma once

#include "qprospect/events.hpp"

#include <vector>

namespace qprospect {

class CompositeState {
public:
    /// Validates Hermiticity, unit trace and PSD of a (dims.a * dims.b)-square matrix.
    CompositeState(ComplexMatrix matrix, Dims dims);

    /// Pure state with amplitudes c(n, alpha): rho^{ab}_{mn} = c_{m a} c*_{n b}.
    /// Requires sum |c|^2 = 1 within the operator tolerance.
    static CompositeState from_amplitudes(const ComplexMatrix& c);
    static CompositeState product(const DensityOperator& rho_a, const DensityOperator& rho_b);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    Dims dims() const noexcept { return dims_; }

    /// rho^{alpha beta}_{m n}.
    Complex element(Index m, Index alpha, Index n, Index beta) const;

    ComplexMatrix reduced_a() const;  // Tr_B
    ComplexMatrix reduced_b() const;  // Tr_A

private:
    ComplexMatrix matrix_;
    Dims dims_;
};

/// pi_n = A_n (x) B with b the coefficients of |B> over the B-side basis.
struct Prospect {
    Index n = 0;
    ComplexVector b;

    Prospect(Index index, ComplexVector coefficients);
};

struct ProspectProbability {
    double p = 0.0;  // total
    double f = 0.0;  // diagonal (classical) part
    double q = 0.0;  // interference part
};

double joint_probability(const CompositeState& rho, Index n, Index alpha);
/// T(n, alpha) = p(A_n (x) B_alpha).
RealMatrix joint_table(const CompositeState& rho);

struct Marginals {
    std::vector<double> a;  // p(A_n) = sum_alpha p(A_n (x) B_alpha)
    std::vector<double> b;  // p(B_alpha) = sum_n p(A_n (x) B_alpha)
    /// Largest disagreement with the diagonals of Tr_B rho and Tr_A rho.
    double partial_trace_residual = 0.0;
};

Marginals marginals(const CompositeState& rho);

/// p(A_n|B_alpha) = p(A_n (x) B_alpha) / p(B_alpha).
double bayes_conditional(const CompositeState& rho, Index n, Index alpha);

/// P(pi_n) = P_n (x) |B><B| on the composite space.
ComplexMatrix prospect_operator(Dims dims, const Prospect& prospect);

/// Residuals of sum_n P(pi_n) against 1_AB and against 1_A (x) P_B.
struct ResolutionResidual {
    double against_identity = 0.0;
    double against_a_identity_times_pb = 0.0;
};
ResolutionResidual prospect_resolution_residual(Dims dims, const ComplexVector& b);

/// Raw prospect probability: p = sum_{ab} b*_a b_b <n a|rho|n b>, f and q its
/// diagonal and interference parts (q = 2 Re sum_{a<b}).
ProspectProbability prospect_probability(const CompositeState& rho, const Prospect& prospect);

/// Prospect probability, optionally normalised over the lattice {pi_m} that
/// shares `prospect.b`. Normalised values are p' = p / sum p, f' = f / sum f,
/// q' = p' - f', so sum p' = sum f' = 1 and sum q' = 0.
ProspectProbability prospect_probability(const CompositeState& rho, const Prospect& prospect,
                                         bool normalize);

/// Every prospect of the lattice {pi_n : n = 0..dim_A-1} with a shared b.
std::vector<ProspectProbability> prospect_lattice(const CompositeState& rho, const ComplexVector& b,
                                                  bool normalize = true);

/// p(A_n|B) = p(A_n (x) B) / p(B), with p(B) = <B| Tr_A rho |B> including q(B).
double conditional_under_uncertainty(const CompositeState& rho, const Prospect& prospect);

struct ClassicalLimitReport {
    std::vector<ProspectProbability> normalized;
    double sum_f = 0.0;
    double sum_q = 0.0;
    double min_q = 0.0;
    double max_q = 0.0;
    bool passed = false;
};

/// Checks sum q = 0, q in [-1,1] and f in [0,1] over a complete normalised lattice.
ClassicalLimitReport classical_limit_check(const std::vector<Prospect>& lattice,
                                           const CompositeState& rho);

}  // namespace qprospect
