#include "qprospect/measure.hpp"

#include "qprospect/numeric.hpp"

#include <algorithm>
#include <set>

namespace qprospect {

namespace {

void require_dim(Index a, Index b, const char* what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
    }
}

double raw_born(const DensityOperator& rho, const ComplexVector& v) {
    return v.dot(rho.matrix() * v).real();
}

}  // namespace

double born_probability(const DensityOperator& rho, const Observable& obs, Index n) {
    require_dim(rho.dim(), obs.dim(), "born_probability");
    return checked_probability(raw_born(rho, obs.eigenvector(n)), "born_probability");
}

std::vector<double> born_distribution(const DensityOperator& rho, const Observable& obs) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(obs.dim()));
    for (Index n = 0; n < obs.dim(); ++n) out.push_back(born_probability(rho, obs, n));
    return out;
}

double expected_value(const DensityOperator& rho, const Observable& obs) {
    const auto p = born_distribution(rho, obs);
    double sum = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) sum += p[n] * obs.eigenvalues()[n];
    return sum;
}

Index most_probable(const DensityOperator& rho, const Observable& obs) {
    const auto p = born_distribution(rho, obs);
    // max_element returns the first maximum, which is the lowest index.
    return static_cast<Index>(std::max_element(p.begin(), p.end()) - p.begin());
}

double disjoint_union_probability(const DensityOperator& rho, const Observable& obs,
                                  const std::vector<Index>& indices) {
    std::set<Index> seen;
    for (Index i : indices) {
        if (!seen.insert(i).second) {
            throw ValidationError("distinct events",
                                  "disjoint_union_probability: duplicate index " + std::to_string(i));
        }
    }
    double sum = 0.0;
    for (Index i : indices) sum += born_probability(rho, obs, i);
    return checked_probability(sum, "disjoint_union_probability");
}

DensityOperator luders_reduce(const DensityOperator& rho, const Observable& obs, Index n) {
    const double p = born_probability(rho, obs, n);
    if (p <= tolerance::kDivisionGuard) {
        throw NumericError("luders_reduce: event " + obs.label() + "[" + std::to_string(n) +
                           "] has zero probability");
    }
    const ComplexMatrix proj = projector_of(obs, n).matrix();
    ComplexMatrix reduced = proj * rho.matrix() * proj / p;
    reduced = 0.5 * (reduced + reduced.adjoint()).eval();
    // Renormalise away the rounding left by p.
    reduced /= reduced.trace().real();
    return DensityOperator(std::move(reduced));
}

MeasurementOutcome measure(const DensityOperator& rho, const Observable& obs, Index n) {
    return MeasurementOutcome{EventId{obs.label(), n}, born_probability(rho, obs, n),
                              luders_reduce(rho, obs, n)};
}

double luders_transition(const Observable& obs_a, Index n, const Observable& obs_b, Index alpha) {
    require_dim(obs_a.dim(), obs_b.dim(), "luders_transition");
    const Complex overlap = obs_a.eigenvector(n).dot(obs_b.eigenvector(alpha));
    return checked_probability(std::norm(overlap), "luders_transition");
}

RealMatrix luders_transition_table(const Observable& obs_a, const Observable& obs_b) {
    require_dim(obs_a.dim(), obs_b.dim(), "luders_transition_table");
    RealMatrix t(obs_a.dim(), obs_b.dim());
    for (Index n = 0; n < obs_a.dim(); ++n)
        for (Index a = 0; a < obs_b.dim(); ++a) t(n, a) = luders_transition(obs_a, n, obs_b, a);
    return t;
}

double wigner_distribution(const DensityOperator& rho, const Observable& obs_a, Index n,
                           const Observable& obs_b, Index alpha) {
    require_dim(rho.dim(), obs_a.dim(), "wigner_distribution");
    require_dim(rho.dim(), obs_b.dim(), "wigner_distribution");
    const ComplexMatrix pa = projector_of(obs_b, alpha).matrix();
    const ComplexMatrix pn = projector_of(obs_a, n).matrix();
    const Complex w = (rho.matrix() * pa * pn * pa).trace();
    return checked_probability(w.real(), "wigner_distribution");
}

Complex kirkwood_form(const DensityOperator& rho, const Observable& obs_a, Index n,
                      const Observable& obs_b, Index alpha) {
    require_dim(rho.dim(), obs_a.dim(), "kirkwood_form");
    require_dim(rho.dim(), obs_b.dim(), "kirkwood_form");
    const ComplexMatrix pn = projector_of(obs_a, n).matrix();
    const ComplexMatrix pa = projector_of(obs_b, alpha).matrix();
    return (rho.matrix() * pn * pa).trace();
}

double identity_chain_residual(const DensityOperator& rho, const Observable& obs_a, Index n,
                               const Observable& obs_b) {
    require_dim(rho.dim(), obs_a.dim(), "identity_chain_residual");
    require_dim(rho.dim(), obs_b.dim(), "identity_chain_residual");
    const Index d = obs_b.dim();
    const ComplexMatrix pn = projector_of(obs_a, n).matrix();
    std::vector<ComplexMatrix> pb;
    pb.reserve(static_cast<std::size_t>(d));
    for (Index a = 0; a < d; ++a) pb.push_back(projector_of(obs_b, a).matrix());

    const Complex lhs = (rho.matrix() * pn).trace();
    Complex wigner_sum{0.0, 0.0};
    Complex cross_sum{0.0, 0.0};
    for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) {
            const Complex term = (rho.matrix() * pb[a] * pn * pb[b]).trace();
            if (a == b) {
                wigner_sum += term;
            } else {
                cross_sum += term;
            }
        }
    }
    return std::abs(lhs - wigner_sum - cross_sum);
}

}  // namespace qprospect
