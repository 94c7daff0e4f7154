#include "qprospect/composite.hpp"

#include "qprospect/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qprospect {

namespace {

void require_index(Index i, Index dim, const char* what) {
    if (i < 0 || i >= dim) {
        throw IndexError(std::string(what) + ": index " + std::to_string(i) + " out of range [0," +
                         std::to_string(dim) + ")");
    }
}

void require_b(const CompositeState& rho, const ComplexVector& b, const char* what) {
    if (b.size() != rho.dims().b) {
        throw ShapeError(std::string(what) + ": multimode vector has " + std::to_string(b.size()) +
                         " coefficients, B factor has dimension " + std::to_string(rho.dims().b));
    }
}

}  // namespace

// -- CompositeState ----------------------------------------------------------

CompositeState::CompositeState(ComplexMatrix matrix, Dims dims) : matrix_(std::move(matrix)), dims_(dims) {
    require_square(matrix_, "composite state");
    if (dims_.a <= 0 || dims_.b <= 0 || dims_.total() != matrix_.rows()) {
        throw ShapeError("composite state: dims " + std::to_string(dims_.a) + "x" +
                         std::to_string(dims_.b) + " do not match a " +
                         std::to_string(matrix_.rows()) + "-dim matrix");
    }
    // The single-space checks carry over verbatim.
    (void)DensityOperator(matrix_);
}

CompositeState CompositeState::from_amplitudes(const ComplexMatrix& c) {
    if (c.rows() <= 0 || c.cols() <= 0) throw ShapeError("from_amplitudes: empty amplitude matrix");
    require_finite(c, "from_amplitudes");
    const double norm2 = c.squaredNorm();
    if (std::abs(norm2 - 1.0) > tolerance::operator_tolerance()) {
        std::ostringstream os;
        os.precision(17);
        os << "from_amplitudes: sum |c|^2 = " << norm2 << " is not 1";
        throw ValidationError("unit norm", os.str());
    }
    // |n alpha> ordering: flatten row-major.
    ComplexVector psi(c.size());
    for (Index n = 0; n < c.rows(); ++n)
        for (Index a = 0; a < c.cols(); ++a) psi(n * c.cols() + a) = c(n, a);
    psi /= std::sqrt(norm2);
    ComplexMatrix m = outer(psi, psi);
    m = 0.5 * (m + m.adjoint()).eval();
    return CompositeState(std::move(m), Dims{c.rows(), c.cols()});
}

CompositeState CompositeState::product(const DensityOperator& rho_a, const DensityOperator& rho_b) {
    return CompositeState(tensor_product(rho_a.matrix(), rho_b.matrix()), Dims{rho_a.dim(), rho_b.dim()});
}

Complex CompositeState::element(Index m, Index alpha, Index n, Index beta) const {
    require_index(m, dims_.a, "element");
    require_index(n, dims_.a, "element");
    require_index(alpha, dims_.b, "element");
    require_index(beta, dims_.b, "element");
    return matrix_(m * dims_.b + alpha, n * dims_.b + beta);
}

ComplexMatrix CompositeState::reduced_a() const {
    return partial_trace(matrix_, dims_, Factor::A);
}

ComplexMatrix CompositeState::reduced_b() const {
    return partial_trace(matrix_, dims_, Factor::B);
}

Prospect::Prospect(Index index, ComplexVector coefficients) : n(index), b(std::move(coefficients)) {
    require_finite(b, "prospect");
    if (b.size() == 0 || b.cwiseAbs().maxCoeff() == 0.0) {
        throw ValidationError("nonzero multimode", "prospect: multimode vector has no nonzero coefficient");
    }
}

// -- joint / marginal / conditional -------------------------------------------

double joint_probability(const CompositeState& rho, Index n, Index alpha) {
    const Complex d = rho.element(n, alpha, n, alpha);
    if (std::abs(d.imag()) > tolerance::kProbability) {
        throw NumericError("joint_probability: diagonal element is not real");
    }
    return checked_probability(d.real(), "joint_probability");
}

RealMatrix joint_table(const CompositeState& rho) {
    RealMatrix t(rho.dims().a, rho.dims().b);
    for (Index n = 0; n < rho.dims().a; ++n)
        for (Index a = 0; a < rho.dims().b; ++a) t(n, a) = joint_probability(rho, n, a);
    return t;
}

Marginals marginals(const CompositeState& rho) {
    const RealMatrix t = joint_table(rho);
    Marginals out;
    out.a.resize(static_cast<std::size_t>(t.rows()));
    out.b.resize(static_cast<std::size_t>(t.cols()));
    for (Index n = 0; n < t.rows(); ++n) out.a[static_cast<std::size_t>(n)] = t.row(n).sum();
    for (Index a = 0; a < t.cols(); ++a) out.b[static_cast<std::size_t>(a)] = t.col(a).sum();

    const ComplexMatrix ra = rho.reduced_a();
    const ComplexMatrix rb = rho.reduced_b();
    double residual = 0.0;
    for (Index n = 0; n < t.rows(); ++n)
        residual = std::max(residual, std::abs(ra(n, n) - out.a[static_cast<std::size_t>(n)]));
    for (Index a = 0; a < t.cols(); ++a)
        residual = std::max(residual, std::abs(rb(a, a) - out.b[static_cast<std::size_t>(a)]));
    out.partial_trace_residual = residual;
    return out;
}

double bayes_conditional(const CompositeState& rho, Index n, Index alpha) {
    require_index(alpha, rho.dims().b, "bayes_conditional");
    double pb = 0.0;
    for (Index m = 0; m < rho.dims().a; ++m) pb += joint_probability(rho, m, alpha);
    if (pb <= tolerance::kDivisionGuard) {
        throw NumericError("bayes_conditional: conditioning event B_" + std::to_string(alpha) +
                           " has zero probability");
    }
    return checked_probability(joint_probability(rho, n, alpha) / pb, "bayes_conditional");
}

// -- prospects ---------------------------------------------------------------

ComplexMatrix prospect_operator(Dims dims, const Prospect& prospect) {
    require_index(prospect.n, dims.a, "prospect_operator");
    if (prospect.b.size() != dims.b) throw ShapeError("prospect_operator: multimode dimension");
    ComplexVector en = ComplexVector::Zero(dims.a);
    en(prospect.n) = 1.0;
    return tensor_product(outer(en, en), outer(prospect.b, prospect.b));
}

ResolutionResidual prospect_resolution_residual(Dims dims, const ComplexVector& b) {
    ComplexMatrix sum = ComplexMatrix::Zero(dims.total(), dims.total());
    for (Index n = 0; n < dims.a; ++n) sum += prospect_operator(dims, Prospect(n, b));
    ResolutionResidual r;
    r.against_identity = max_abs_diff(sum, identity(dims.total()));
    r.against_a_identity_times_pb = max_abs_diff(sum, tensor_product(identity(dims.a), outer(b, b)));
    return r;
}

ProspectProbability prospect_probability(const CompositeState& rho, const Prospect& prospect) {
    require_index(prospect.n, rho.dims().a, "prospect_probability");
    require_b(rho, prospect.b, "prospect_probability");
    const Index db = rho.dims().b;
    const auto block = rho.matrix().block(prospect.n * db, prospect.n * db, db, db);
    const ComplexVector& b = prospect.b;

    const Complex total = b.dot(block * b);
    double f = 0.0;
    Complex half_cross{0.0, 0.0};
    for (Index a = 0; a < db; ++a) {
        f += std::norm(b(a)) * block(a, a).real();
        for (Index c = a + 1; c < db; ++c) half_cross += std::conj(b(a)) * b(c) * block(a, c);
    }
    const double q = 2.0 * half_cross.real();

    const double scale = std::max(1.0, b.squaredNorm());
    if (std::abs(total.imag()) > tolerance::kProbability * scale) {
        throw NumericError("prospect_probability: imaginary residue in p");
    }
    if (std::abs(total.real() - f - q) > tolerance::kProbability * scale) {
        throw NumericError("prospect_probability: p != f + q");
    }
    if (total.real() < -tolerance::kProbability * scale || f < -tolerance::kProbability * scale) {
        throw NumericError("prospect_probability: negative probability");
    }
    return {f + q, f, q};
}

std::vector<ProspectProbability> prospect_lattice(const CompositeState& rho, const ComplexVector& b,
                                                  bool normalize) {
    std::vector<ProspectProbability> raw;
    raw.reserve(static_cast<std::size_t>(rho.dims().a));
    double sum_p = 0.0;
    double sum_f = 0.0;
    for (Index n = 0; n < rho.dims().a; ++n) {
        raw.push_back(prospect_probability(rho, Prospect(n, b)));
        sum_p += raw.back().p;
        sum_f += raw.back().f;
    }
    if (!normalize) return raw;
    if (sum_p <= tolerance::kDivisionGuard || sum_f <= tolerance::kDivisionGuard) {
        throw NumericError("prospect lattice is degenerate: sum of prospect probabilities vanishes");
    }
    for (auto& pp : raw) {
        pp.p = checked_probability(pp.p / sum_p, "normalized prospect probability");
        pp.f = checked_probability(pp.f / sum_f, "normalized classical part");
        pp.q = pp.p - pp.f;
    }
    return raw;
}

ProspectProbability prospect_probability(const CompositeState& rho, const Prospect& prospect,
                                         bool normalize) {
    if (!normalize) return prospect_probability(rho, prospect);
    require_index(prospect.n, rho.dims().a, "prospect_probability");
    return prospect_lattice(rho, prospect.b, true)[static_cast<std::size_t>(prospect.n)];
}

double conditional_under_uncertainty(const CompositeState& rho, const Prospect& prospect) {
    const ProspectProbability joint = prospect_probability(rho, prospect);
    const DensityOperator rho_b(rho.reduced_b());
    const MultimodeProbability pb =
        multimode_probability(rho_b, MultimodeState(prospect.b, Observable::computational(rho.dims().b)));
    if (pb.p <= tolerance::kDivisionGuard) {
        throw NumericError("conditional_under_uncertainty: p(B) vanishes");
    }
    return checked_probability(joint.p / pb.p, "conditional_under_uncertainty");
}

ClassicalLimitReport classical_limit_check(const std::vector<Prospect>& lattice,
                                           const CompositeState& rho) {
    const Index da = rho.dims().a;
    if (static_cast<Index>(lattice.size()) != da) {
        throw ValidationError("complete lattice", "classical_limit_check: lattice has " +
                                                      std::to_string(lattice.size()) +
                                                      " prospects, observable A has " +
                                                      std::to_string(da) + " events");
    }
    std::vector<bool> covered(static_cast<std::size_t>(da), false);
    for (const auto& pr : lattice) {
        require_index(pr.n, da, "classical_limit_check");
        require_b(rho, pr.b, "classical_limit_check");
        if (covered[static_cast<std::size_t>(pr.n)] || pr.b != lattice.front().b) {
            throw ValidationError("complete lattice",
                                  "classical_limit_check: lattice must cover every n once with a shared b");
        }
        covered[static_cast<std::size_t>(pr.n)] = true;
    }

    ClassicalLimitReport report;
    report.normalized = prospect_lattice(rho, lattice.front().b, true);
    report.min_q = std::numeric_limits<double>::infinity();
    report.max_q = -std::numeric_limits<double>::infinity();
    bool bounds_ok = true;
    for (const auto& pp : report.normalized) {
        report.sum_f += pp.f;
        report.sum_q += pp.q;
        report.min_q = std::min(report.min_q, pp.q);
        report.max_q = std::max(report.max_q, pp.q);
        bounds_ok = bounds_ok && pp.q >= -1.0 - tolerance::kProbability &&
                    pp.q <= 1.0 + tolerance::kProbability && pp.f >= 0.0 && pp.f <= 1.0;
    }
    report.passed = bounds_ok && std::abs(report.sum_q) <= 1e-10;
    return report;
}

}  // namespace qprospect
