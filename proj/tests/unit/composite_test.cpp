#include <qprospect/composite.hpp>
#include <qprospect/entangle.hpp>
#include <qprospect/measure.hpp>
#include <qprospect/numeric.hpp>
#include <qprospect/random.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace qp = qprospect;
using qp::Complex;
using qp::ComplexMatrix;
using qp::ComplexVector;
using qp::CompositeState;
using qp::DensityOperator;
using qp::Dims;
using qp::Index;
using qp::Prospect;

namespace {

CompositeState asymmetric_state() {
    ComplexMatrix c(2, 2);
    c << 0.6, 0.3, 0.2, std::sqrt(1.0 - 0.36 - 0.09 - 0.04);
    return CompositeState::from_amplitudes(c);
}

CompositeState diagonal_separable(const std::vector<double>& weights, Dims dims) {
    ComplexMatrix m = ComplexMatrix::Zero(dims.total(), dims.total());
    for (Index i = 0; i < dims.total(); ++i) m(i, i) = weights[static_cast<std::size_t>(i)];
    return CompositeState(m, dims);
}

// <pi|rho|pi> with |pi> = |n> (x) sum_a b_a |a>, summed element by element.
Complex brute_prospect(const CompositeState& rho, Index n, const ComplexVector& b) {
    const Index db = rho.dims().b;
    Complex acc = 0.0;
    for (Index a = 0; a < db; ++a)
        for (Index c = 0; c < db; ++c) acc += std::conj(b(a)) * rho.element(n, a, n, c) * b(c);
    return acc;
}

}  // namespace

TEST(CompositeState, Validation) {
    EXPECT_THROW(CompositeState(qp::identity(4) / 4.0, Dims{3, 2}), qp::ShapeError);
    try {
        CompositeState(qp::identity(4), Dims{2, 2});
        FAIL();
    } catch (const qp::ValidationError& e) {
        EXPECT_EQ(e.constraint(), "unit trace");
    }
    try {
        (void)CompositeState::from_amplitudes(ComplexMatrix::Ones(2, 2));
        FAIL();
    } catch (const qp::ValidationError& e) {
        EXPECT_EQ(e.constraint(), "unit norm");
    }
}

TEST(CompositeState, ElementOrderingAndReductions) {
    qp::random::Engine rng(201);
    const CompositeState rho = qp::random::mixed_composite(Dims{3, 2}, rng);
    for (Index m = 0; m < 3; ++m)
        for (Index a = 0; a < 2; ++a)
            for (Index n = 0; n < 3; ++n)
                for (Index b = 0; b < 2; ++b) EXPECT_EQ(rho.element(m, a, n, b), rho.matrix()(m * 2 + a, n * 2 + b));
    EXPECT_LE(qp::max_abs_diff(rho.reduced_a(), oracle::partial_trace_sum(rho.matrix(), 3, 2, true)), 1e-14);
    EXPECT_LE(qp::max_abs_diff(rho.reduced_b(), oracle::partial_trace_sum(rho.matrix(), 3, 2, false)), 1e-14);
}

TEST(JointProbability, ProductStateFactorizes) {
    qp::random::Engine rng(203);
    const DensityOperator ra = qp::random::density(3, rng);
    const DensityOperator rb = qp::random::density(4, rng);
    const CompositeState rho = CompositeState::product(ra, rb);
    const qp::Observable za = qp::Observable::computational(3);
    const qp::Observable zb = qp::Observable::computational(4);
    for (Index n = 0; n < 3; ++n)
        for (Index a = 0; a < 4; ++a)
            EXPECT_NEAR(qp::joint_probability(rho, n, a),
                        qp::born_probability(ra, za, n) * qp::born_probability(rb, zb, a), 1e-14);

    const qp::Marginals m = qp::marginals(rho);
    for (Index n = 0; n < 3; ++n) EXPECT_NEAR(m.a[static_cast<std::size_t>(n)], qp::born_probability(ra, za, n), 1e-14);
    for (Index a = 0; a < 4; ++a) EXPECT_NEAR(m.b[static_cast<std::size_t>(a)], qp::born_probability(rb, zb, a), 1e-14);
    for (Index a = 0; a < 4; ++a)
        for (Index n = 0; n < 3; ++n)
            EXPECT_NEAR(qp::bayes_conditional(rho, n, a), qp::born_probability(ra, za, n), 1e-12);
}

TEST(JointProbability, TableIsAsymmetricInGeneral) {
    const qp::RealMatrix t = qp::joint_table(asymmetric_state());
    EXPECT_NEAR(t(0, 1), 0.09, 1e-15);
    EXPECT_NEAR(t(1, 0), 0.04, 1e-15);
    EXPECT_GT(std::abs(t(0, 1) - t(1, 0)), 0.01);
}

TEST(JointProbability, RandomTablesAreDistributions) {
    qp::random::Engine rng(205);
    for (int trial = 0; trial < 60; ++trial) {
        const Dims dims{2 + trial % 4, 2 + (trial / 4) % 4};
        const CompositeState rho =
            trial % 2 == 0 ? qp::random::pure_composite(dims, rng) : qp::random::mixed_composite(dims, rng);
        const qp::RealMatrix t = qp::joint_table(rho);
        EXPECT_GE(t.minCoeff(), 0.0);
        EXPECT_NEAR(t.sum(), 1.0, 1e-12);
        const qp::Marginals m = qp::marginals(rho);
        EXPECT_LE(m.partial_trace_residual, 1e-12);
        for (Index a = 0; a < dims.b; ++a) {
            double s = 0.0;
            for (Index n = 0; n < dims.a; ++n) s += qp::bayes_conditional(rho, n, a);
            EXPECT_NEAR(s, 1.0, 1e-10);
        }
    }
}

TEST(Marginals, BellStateIsUniform) {
    const qp::Marginals m = qp::marginals(qp::bell_state(2));
    for (double v : m.a) EXPECT_NEAR(v, 0.5, 1e-15);
    for (double v : m.b) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(BayesConditional, ZeroProbabilityEvent) {
    ComplexMatrix c = ComplexMatrix::Zero(2, 2);
    c(0, 0) = 1.0;
    EXPECT_THROW((void)qp::bayes_conditional(CompositeState::from_amplitudes(c), 0, 1), qp::NumericError);
    EXPECT_THROW((void)qp::bayes_conditional(CompositeState::from_amplitudes(c), 0, 2), qp::IndexError);
}

TEST(ProspectProbability, SingleModeHasNoInterference) {
    qp::random::Engine rng(207);
    const CompositeState rho = qp::random::mixed_composite(Dims{3, 3}, rng);
    ComplexVector b = ComplexVector::Zero(3);
    b(2) = Complex(0.4, 0.3);
    for (Index n = 0; n < 3; ++n) {
        const auto pp = qp::prospect_probability(rho, Prospect(n, b));
        EXPECT_EQ(pp.q, 0.0);
        EXPECT_NEAR(pp.p, 0.25 * rho.element(n, 2, n, 2).real(), 1e-15);
    }
}

TEST(ProspectProbability, SeparableDiagonalHasNoInterference) {
    const CompositeState rho = diagonal_separable({0.1, 0.2, 0.3, 0.15, 0.05, 0.2}, Dims{2, 3});
    ComplexVector b(3);
    b << 1.0, Complex(0, 1), 0.5;
    for (Index n = 0; n < 2; ++n) EXPECT_EQ(qp::prospect_probability(rho, Prospect(n, b)).q, 0.0);
}

TEST(ProspectProbability, DecompositionMatchesBruteForce) {
    qp::random::Engine rng(209);
    for (int trial = 0; trial < 100; ++trial) {
        const Dims dims{2 + trial % 4, 2 + (trial / 4) % 5};
        const CompositeState rho = qp::random::pure_composite(dims, rng);
        const ComplexVector b = qp::random::gaussian_vector(dims.b, rng);
        for (Index n = 0; n < dims.a; ++n) {
            const auto pp = qp::prospect_probability(rho, Prospect(n, b));
            EXPECT_EQ(pp.p, pp.f + pp.q);
            const Complex brute = brute_prospect(rho, n, b);
            EXPECT_NEAR(pp.p, brute.real(), 1e-12);
            EXPECT_NEAR(brute.imag(), 0.0, 1e-12);

            // Full alpha != beta double sum against the 2 Re sum_{alpha<beta} form.
            Complex q_full = 0.0;
            for (Index a = 0; a < dims.b; ++a)
                for (Index c = 0; c < dims.b; ++c)
                    if (a != c) q_full += std::conj(b(a)) * rho.element(n, a, n, c) * b(c);
            EXPECT_NEAR(pp.q, q_full.real(), 1e-14 * std::max(1.0, b.squaredNorm()));

            const ComplexMatrix op = qp::prospect_operator(dims, Prospect(n, b));
            EXPECT_NEAR(pp.p, (rho.matrix() * op).trace().real(), 1e-12);
        }
    }
}

TEST(ProspectProbability, NormalizedLatticeProperties) {
    qp::random::Engine rng(211);
    for (int trial = 0; trial < 100; ++trial) {
        const Dims dims{2 + trial % 5, 2 + (trial / 5) % 4};
        const CompositeState rho = qp::random::pure_composite(dims, rng);
        const ComplexVector b = qp::random::gaussian_vector(dims.b, rng);
        const auto lattice = qp::prospect_lattice(rho, b, true);
        double sp = 0.0, sf = 0.0, sq = 0.0;
        for (const auto& pp : lattice) {
            EXPECT_EQ(pp.q, pp.p - pp.f);
            EXPECT_GE(pp.q, -1.0);
            EXPECT_LE(pp.q, 1.0);
            sp += pp.p;
            sf += pp.f;
            sq += pp.q;
        }
        EXPECT_NEAR(sp, 1.0, 1e-12);
        EXPECT_NEAR(sf, 1.0, 1e-12);
        EXPECT_NEAR(sq, 0.0, 1e-10);

        // The normalized total equals the conditional under uncertainty.
        for (Index n = 0; n < dims.a; ++n) {
            EXPECT_NEAR(lattice[static_cast<std::size_t>(n)].p,
                        qp::conditional_under_uncertainty(rho, Prospect(n, b)), 1e-12);
            const auto single = qp::prospect_probability(rho, Prospect(n, b), true);
            EXPECT_EQ(single.p, lattice[static_cast<std::size_t>(n)].p);
        }
    }
}

TEST(ProspectProbability, Errors) {
    const CompositeState rho = asymmetric_state();
    EXPECT_THROW(Prospect(0, ComplexVector::Zero(2)), qp::ValidationError);
    EXPECT_THROW((void)qp::prospect_probability(rho, Prospect(0, ComplexVector::Ones(3))), qp::ShapeError);
    EXPECT_THROW((void)qp::prospect_probability(rho, Prospect(2, ComplexVector::Ones(2))), qp::IndexError);

    ComplexMatrix c = ComplexMatrix::Zero(2, 2);
    c(0, 0) = 1.0;
    ComplexVector b(2);
    b << 0.0, 1.0;
    EXPECT_THROW((void)qp::prospect_lattice(CompositeState::from_amplitudes(c), b, true), qp::NumericError);
    EXPECT_NO_THROW((void)qp::prospect_lattice(CompositeState::from_amplitudes(c), b, false));
}

TEST(ProspectResolution, ResidualsAreReportedNotAsserted) {
    qp::random::Engine rng(213);
    const ComplexVector b = qp::random::unit_vector(3, rng);
    const auto r = qp::prospect_resolution_residual(Dims{2, 3}, b);
    EXPECT_LE(r.against_a_identity_times_pb, 1e-15);
    EXPECT_GT(r.against_identity, 0.1);
}

TEST(ConditionalUnderUncertainty, Examples) {
    qp::random::Engine rng(215);
    const CompositeState mixed = qp::random::mixed_composite(Dims{3, 3}, rng);
    ComplexVector single = ComplexVector::Zero(3);
    single(1) = 0.7;
    for (Index n = 0; n < 3; ++n) {
        EXPECT_NEAR(qp::conditional_under_uncertainty(mixed, Prospect(n, single)), qp::bayes_conditional(mixed, n, 1),
                    1e-12);
    }

    const DensityOperator ra = qp::random::density(3, rng);
    const CompositeState product = CompositeState::product(ra, qp::random::density(2, rng));
    for (int k = 0; k < 5; ++k) {
        const ComplexVector b = qp::random::gaussian_vector(2, rng);
        for (Index n = 0; n < 3; ++n) {
            EXPECT_NEAR(qp::conditional_under_uncertainty(product, Prospect(n, b)),
                        qp::born_probability(ra, qp::Observable::computational(3), n), 1e-12);
        }
    }

    for (Index m = 2; m <= 6; ++m) {
        const CompositeState bell = qp::bell_state(m);
        for (Index n = 0; n < m; ++n) {
            EXPECT_NEAR(qp::conditional_under_uncertainty(bell, Prospect(n, ComplexVector::Ones(m))),
                        1.0 / static_cast<double>(m), 1e-12);
        }
    }
}

TEST(ClassicalLimit, SeparableDiagonal) {
    const CompositeState rho = diagonal_separable({0.1, 0.2, 0.3, 0.15, 0.05, 0.2}, Dims{2, 3});
    ComplexVector b(3);
    b << 1.0, 0.5, Complex(0.0, 2.0);
    const auto rep = qp::classical_limit_check({Prospect(0, b), Prospect(1, b)}, rho);
    EXPECT_TRUE(rep.passed);
    EXPECT_NEAR(rep.sum_f, 1.0, 1e-12);
    for (const auto& pp : rep.normalized) EXPECT_NEAR(pp.q, 0.0, 1e-15);
}

TEST(ClassicalLimit, EntangledStatePassesWithNonzeroInterference) {
    const CompositeState rho = asymmetric_state();
    const ComplexVector b = ComplexVector::Ones(2);
    const auto rep = qp::classical_limit_check({Prospect(0, b), Prospect(1, b)}, rho);
    EXPECT_TRUE(rep.passed);
    EXPECT_NEAR(rep.sum_q, 0.0, 1e-10);
    EXPECT_GT(rep.max_q, 0.01);
}

TEST(ClassicalLimit, IncompleteOrInconsistentLattice) {
    const CompositeState rho = asymmetric_state();
    const ComplexVector b = ComplexVector::Ones(2);
    EXPECT_THROW((void)qp::classical_limit_check({Prospect(0, b)}, rho), qp::ValidationError);
    EXPECT_THROW((void)qp::classical_limit_check({Prospect(0, b), Prospect(0, b)}, rho), qp::ValidationError);
    ComplexVector other(2);
    other << 1.0, -1.0;
    EXPECT_THROW((void)qp::classical_limit_check({Prospect(0, b), Prospect(1, other)}, rho), qp::ValidationError);
}
