#include <qprospect/numeric.hpp>
#include <qprospect/qcore.hpp>
#include <qprospect/random.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace qp = qprospect;
using qp::Complex;
using qp::ComplexMatrix;
using qp::Dims;
using qp::Factor;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix random_hermitian(qp::Index d, qp::random::Engine& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(d, d);
    for (qp::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
    return 0.5 * (m + m.adjoint());
}

ComplexMatrix random_matrix(qp::Index r, qp::Index c, qp::random::Engine& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(r, c);
    for (qp::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
    return m;
}

}  // namespace

TEST(TensorProduct, IdentityTimesIdentity) {
    EXPECT_EQ(qp::max_abs_diff(qp::tensor_product(qp::identity(2), qp::identity(2)), qp::identity(4)), 0.0);
}

TEST(TensorProduct, ProjectorProduct) {
    ComplexMatrix p = ComplexMatrix::Zero(2, 2);
    p(0, 0) = 1.0;
    ComplexMatrix want = ComplexMatrix::Zero(4, 4);
    want(0, 0) = 1.0;
    EXPECT_EQ(qp::max_abs_diff(qp::tensor_product(p, p), want), 0.0);
}

TEST(TensorProduct, MatchesElementwiseKronecker) {
    qp::random::Engine rng(11);
    const ComplexMatrix a = random_matrix(2, 2, rng);
    const ComplexMatrix b = random_matrix(3, 3, rng);
    const ComplexMatrix ab = qp::tensor_product(a, b);
    EXPECT_LE(qp::max_abs_diff(ab, oracle::kron(a, b)), 1e-15);
    EXPECT_NEAR(std::abs(ab.trace() - a.trace() * b.trace()), 0.0, 1e-12);
}

TEST(TensorProduct, Rectangular) {
    qp::random::Engine rng(12);
    const ComplexMatrix a = random_matrix(2, 3, rng);
    const ComplexMatrix b = random_matrix(4, 1, rng);
    EXPECT_LE(qp::max_abs_diff(qp::tensor_product(a, b), oracle::kron(a, b)), 1e-15);
}

TEST(TensorProduct, Associative) {
    qp::random::Engine rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_matrix(2, 2, rng);
        const ComplexMatrix b = random_matrix(3, 2, rng);
        const ComplexMatrix c = random_matrix(2, 3, rng);
        const ComplexMatrix left = qp::tensor_product(qp::tensor_product(a, b), c);
        const ComplexMatrix right = qp::tensor_product(a, qp::tensor_product(b, c));
        EXPECT_LE(qp::max_abs_diff(left, right), 1e-12);
    }
}

TEST(TensorProduct, SizeLimit) {
    const ComplexMatrix big = ComplexMatrix::Zero(65, 1);
    try {
        (void)qp::tensor_product(big, big);
        FAIL() << "expected a size-limit error";
    } catch (const qp::ValidationError& e) {
        EXPECT_EQ(e.constraint(), "size limit");
    }
}

TEST(PartialTrace, ProductStateRecoversFactor) {
    qp::random::Engine rng(21);
    const auto ra = qp::random::density(3, rng);
    const auto rb = qp::random::density(2, rng);
    const ComplexMatrix ab = qp::tensor_product(ra.matrix(), rb.matrix());
    EXPECT_LE(qp::max_abs_diff(qp::partial_trace(ab, Dims{3, 2}, Factor::A), ra.matrix()), 1e-14);
    EXPECT_LE(qp::max_abs_diff(qp::partial_trace(ab, Dims{3, 2}, Factor::B), rb.matrix()), 1e-14);
}

TEST(PartialTrace, BellStateGivesHalfIdentity) {
    ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    EXPECT_LE(qp::max_abs_diff(qp::partial_trace(bell, Dims{2, 2}, Factor::A), qp::identity(2) / 2.0), 1e-15);
    EXPECT_LE(qp::max_abs_diff(qp::partial_trace(bell, Dims{2, 2}, Factor::B), qp::identity(2) / 2.0), 1e-15);
}

TEST(PartialTrace, MatchesIndexSumsAndIsLinear) {
    qp::random::Engine rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const Dims d{2 + trial % 3, 1 + trial % 4};
        const ComplexMatrix m1 = random_matrix(d.total(), d.total(), rng);
        const ComplexMatrix m2 = random_matrix(d.total(), d.total(), rng);
        const Complex s(0.3, -1.7);
        for (bool keep_a : {true, false}) {
            const Factor f = keep_a ? Factor::A : Factor::B;
            EXPECT_LE(qp::max_abs_diff(qp::partial_trace(m1, d, f), oracle::partial_trace_sum(m1, d.a, d.b, keep_a)),
                      1e-13);
            const ComplexMatrix lin = qp::partial_trace(ComplexMatrix(m1 + s * m2), d, f);
            const ComplexMatrix sep = qp::partial_trace(m1, d, f) + s * qp::partial_trace(m2, d, f);
            EXPECT_LE(qp::max_abs_diff(lin, sep), 1e-12);
            EXPECT_NEAR(std::abs(qp::partial_trace(m1, d, f).trace() - m1.trace()), 0.0, 1e-12);
        }
    }
}

TEST(PartialTrace, ShapeErrors) {
    EXPECT_THROW((void)qp::partial_trace(ComplexMatrix::Zero(4, 3), Dims{2, 2}, Factor::A), qp::ShapeError);
    EXPECT_THROW((void)qp::partial_trace(ComplexMatrix::Zero(4, 4), Dims{3, 2}, Factor::A), qp::ShapeError);
}

TEST(MatrixExponential, ZeroHamiltonian) {
    EXPECT_EQ(qp::max_abs_diff(qp::matrix_exponential(ComplexMatrix::Zero(3, 3), 2.5), qp::identity(3)), 0.0);
}

TEST(MatrixExponential, PauliXQuarterTurn) {
    const ComplexMatrix u = qp::matrix_exponential(pauli_x(), std::numbers::pi / 2);
    // |0> -> -i|1>
    EXPECT_NEAR(std::abs(u(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 0) - Complex(0, -1)), 0.0, 1e-15);
    EXPECT_LE(qp::max_abs_diff(u, oracle::unitary_taylor(pauli_x(), std::numbers::pi / 2)), 1e-13);
}

TEST(MatrixExponential, AgreesWithTaylorOracleAndIsUnitary) {
    qp::random::Engine rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const qp::Index d = 1 + trial % 16;
        const ComplexMatrix h = random_hermitian(d, rng);
        const double t = 0.1 + 0.2 * trial;
        const ComplexMatrix u = qp::matrix_exponential(h, t);
        EXPECT_LE(qp::unitarity_residual(u), 1e-10) << "dim " << d;
        EXPECT_LE(qp::max_abs_diff(u, oracle::unitary_taylor(h, t)), 1e-9) << "dim " << d;
    }
}

TEST(MatrixExponential, RejectsNonHermitian) {
    ComplexMatrix m = pauli_x();
    m(0, 1) = 2.0;
    try {
        (void)qp::matrix_exponential(m, 1.0);
        FAIL();
    } catch (const qp::ValidationError& e) {
        EXPECT_EQ(e.constraint(), "Hermitian");
    }
}

TEST(SpectralNorm, Examples) {
    EXPECT_NEAR(qp::spectral_norm(qp::identity(5)), 1.0, 1e-15);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 0.2;
    d(1, 1) = 0.8;
    EXPECT_NEAR(qp::spectral_norm(d), 0.8, 1e-15);
}

TEST(SpectralNorm, MatchesPowerIteration) {
    qp::random::Engine rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const qp::Index d = 2 + trial % 7;
        const ComplexMatrix g = random_matrix(d, d, rng);
        const ComplexMatrix psd = g * g.adjoint();
        EXPECT_NEAR(qp::spectral_norm(psd), oracle::power_iteration_norm(psd, rng), 1e-10 * qp::spectral_norm(psd));
    }
}

TEST(SpectralNorm, Errors) {
    EXPECT_THROW((void)qp::spectral_norm(ComplexMatrix::Zero(2, 3)), qp::ShapeError);
    ComplexMatrix neg = qp::identity(2);
    neg(1, 1) = -0.5;
    EXPECT_THROW((void)qp::spectral_norm(neg), qp::ValidationError);
}

TEST(NumericPolicy, ToleranceOverride) {
    const double old = qp::tolerance::operator_tolerance();
    EXPECT_DOUBLE_EQ(old, qp::tolerance::kDefaultOperator);
    qp::tolerance::set_operator_tolerance(1e-6);
    EXPECT_DOUBLE_EQ(qp::tolerance::operator_tolerance(), 1e-6);
    qp::tolerance::set_operator_tolerance(old);
    EXPECT_THROW(qp::tolerance::set_operator_tolerance(0.0), qp::ValidationError);
    EXPECT_THROW(qp::tolerance::set_operator_tolerance(-1.0), qp::ValidationError);
}

TEST(NumericPolicy, CheckedProbability) {
    EXPECT_EQ(qp::checked_probability(-5e-13, "p"), 0.0);
    EXPECT_EQ(qp::checked_probability(1.0 + 5e-13, "p"), 1.0);
    EXPECT_EQ(qp::checked_probability(0.25, "p"), 0.25);
    EXPECT_THROW((void)qp::checked_probability(-1e-9, "p"), qp::NumericError);
    EXPECT_THROW((void)qp::checked_probability(1.0 + 1e-9, "p"), qp::NumericError);
}
