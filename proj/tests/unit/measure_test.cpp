#include <qprospect/measure.hpp>
#include <qprospect/numeric.hpp>
#include <qprospect/random.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace qp = qprospect;
using qp::Complex;
using qp::ComplexMatrix;
using qp::ComplexVector;
using qp::DensityOperator;
using qp::Index;
using qp::Observable;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

Observable hadamard() {
    ComplexMatrix h(2, 2);
    h << kS, kS, kS, -kS;
    return Observable("H", {1.0, -1.0}, h);
}

DensityOperator ket(std::initializer_list<Complex> amps) {
    ComplexVector v(static_cast<Index>(amps.size()));
    Index i = 0;
    for (Complex a : amps) v(i++) = a;
    return DensityOperator::from_pure(v);
}

// Brute force Tr(rho P) with P = |v><v| as <v|rho|v>.
double sandwich(const ComplexMatrix& rho, const ComplexVector& v) {
    Complex acc = 0.0;
    for (Index i = 0; i < v.size(); ++i)
        for (Index j = 0; j < v.size(); ++j) acc += std::conj(v(i)) * rho(i, j) * v(j);
    return acc.real();
}

}  // namespace

TEST(Born, Examples) {
    const Observable z = Observable::computational(2);
    EXPECT_EQ(qp::born_probability(ket({1.0, 0.0}), z, 0), 1.0);
    const DensityOperator plus = ket({kS, kS});
    EXPECT_NEAR(qp::born_probability(plus, z, 0), 0.5, 1e-15);
    EXPECT_NEAR(qp::born_probability(plus, z, 1), 0.5, 1e-15);
    EXPECT_THROW((void)qp::born_probability(plus, z, 2), qp::IndexError);
    EXPECT_THROW((void)qp::born_probability(plus, Observable::computational(3), 0), qp::ShapeError);
}

TEST(Born, DistributionPropertyAndBruteForce) {
    qp::random::Engine rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const Index d = 2 + trial % 7;
        const DensityOperator rho = qp::random::density(d, rng, 1 + trial % d);
        const Observable a = qp::random::observable(d, rng);
        const auto p = qp::born_distribution(rho, a);
        EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
        for (Index n = 0; n < d; ++n) {
            const double v = p[static_cast<std::size_t>(n)];
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
            EXPECT_NEAR(v, sandwich(rho.matrix(), a.eigenvector(n)), 1e-13);
        }
    }
}

TEST(ExpectedValue, Examples) {
    const Observable a("A", {-1.0, 0.5, 4.0}, qp::identity(3));
    EXPECT_NEAR(qp::expected_value(DensityOperator::maximally_mixed(3), a), 3.5 / 3.0, 1e-15);
    EXPECT_EQ(qp::expected_value(ket({0.0, 0.0, 1.0}), a), 4.0);
}

TEST(MostProbable, ExamplesAndTieBreak) {
    const Observable z = Observable::computational(2);
    EXPECT_EQ(qp::most_probable(ket({0.0, 1.0}), z), 1);
    EXPECT_EQ(qp::most_probable(DensityOperator::maximally_mixed(2), z), 0);
    EXPECT_EQ(qp::most_probable(DensityOperator::maximally_mixed(5), Observable::computational(5)), 0);
}

TEST(DisjointUnion, ExamplesAndDuplicates) {
    qp::random::Engine rng(103);
    const DensityOperator rho = qp::random::density(4, rng);
    const Observable a = qp::random::observable(4, rng);
    EXPECT_NEAR(qp::disjoint_union_probability(rho, a, {0, 1, 2, 3}), 1.0, 1e-12);
    EXPECT_NEAR(qp::disjoint_union_probability(rho, a, {2}), qp::born_probability(rho, a, 2), 1e-15);
    EXPECT_NEAR(qp::disjoint_union_probability(rho, a, {0, 3}),
                qp::born_probability(rho, a, 0) + qp::born_probability(rho, a, 3), 1e-15);
    try {
        (void)qp::disjoint_union_probability(rho, a, {1, 1});
        FAIL();
    } catch (const qp::ValidationError& e) {
        EXPECT_EQ(e.constraint(), "distinct events");
    }
}

TEST(LudersReduce, Examples) {
    const Observable z = Observable::computational(2);
    const DensityOperator zero = ket({1.0, 0.0});
    EXPECT_LE(qp::max_abs_diff(qp::luders_reduce(zero, z, 0).matrix(), zero.matrix()), 1e-15);
    EXPECT_LE(qp::max_abs_diff(qp::luders_reduce(DensityOperator::maximally_mixed(2), z, 1).matrix(),
                               ket({0.0, 1.0}).matrix()),
              1e-15);
    EXPECT_LE(qp::max_abs_diff(qp::luders_reduce(ket({kS, kS}), z, 0).matrix(), zero.matrix()), 1e-15);
    EXPECT_THROW((void)qp::luders_reduce(zero, z, 1), qp::NumericError);
}

TEST(LudersReduce, ValidAndIdempotent) {
    qp::random::Engine rng(107);
    for (int trial = 0; trial < 30; ++trial) {
        const Index d = 2 + trial % 6;
        const DensityOperator rho = qp::random::density(d, rng);
        const Observable a = qp::random::observable(d, rng);
        const Index n = trial % d;
        const DensityOperator once = qp::luders_reduce(rho, a, n);
        const DensityOperator twice = qp::luders_reduce(once, a, n);
        EXPECT_LE(qp::max_abs_diff(once.matrix(), twice.matrix()), 1e-12);
        EXPECT_NEAR(qp::born_probability(once, a, n), 1.0, 1e-12);

        const auto outcome = qp::measure(rho, a, n);
        EXPECT_EQ(outcome.event.index, n);
        EXPECT_EQ(outcome.event.observable, a.label());
        EXPECT_NEAR(outcome.probability, qp::born_probability(rho, a, n), 1e-15);
        EXPECT_LE(qp::max_abs_diff(outcome.post_state.matrix(), once.matrix()), 1e-15);
    }
}

TEST(LudersTransition, Examples) {
    qp::random::Engine rng(109);
    const Observable a = qp::random::observable(3, rng);
    for (Index n = 0; n < 3; ++n)
        for (Index al = 0; al < 3; ++al) EXPECT_NEAR(qp::luders_transition(a, n, a, al), n == al ? 1.0 : 0.0, 1e-12);
    const Observable z = Observable::computational(2);
    const Observable h = hadamard();
    for (Index n = 0; n < 2; ++n)
        for (Index al = 0; al < 2; ++al) EXPECT_NEAR(qp::luders_transition(z, n, h, al), 0.5, 1e-15);
}

TEST(LudersTransition, SymmetricAndDoublyStochastic) {
    qp::random::Engine rng(113);
    for (int trial = 0; trial < 40; ++trial) {
        const Index d = 2 + trial % 7;
        const Observable a = qp::random::observable(d, rng, "A");
        const Observable b = qp::random::observable(d, rng, "B");
        const qp::RealMatrix t = qp::luders_transition_table(a, b);
        for (Index n = 0; n < d; ++n) {
            for (Index al = 0; al < d; ++al) {
                EXPECT_LE(std::abs(t(n, al) - qp::luders_transition(b, al, a, n)), 1e-14);
                EXPECT_NEAR(t(n, al), std::norm(a.eigenvector(n).dot(b.eigenvector(al))), 1e-14);
            }
        }
        EXPECT_LE((t.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
        EXPECT_LE((t.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    }
}

TEST(Wigner, CompatibleAndMaximallyMixed) {
    qp::random::Engine rng(127);
    const Observable a = qp::random::observable(4, rng, "A");
    const Observable b("B", {3.0, 1.0, 2.0, 0.0}, a.eigenbasis());
    const DensityOperator rho = qp::random::density(4, rng);
    const DensityOperator mixed = DensityOperator::maximally_mixed(4);
    const Observable c = qp::random::observable(4, rng, "C");
    for (Index n = 0; n < 4; ++n) {
        for (Index al = 0; al < 4; ++al) {
            const double delta = n == al ? 1.0 : 0.0;
            EXPECT_NEAR(qp::wigner_distribution(rho, a, n, b, al), delta * qp::born_probability(rho, b, al), 1e-12);
            EXPECT_NEAR(qp::wigner_distribution(mixed, a, n, c, al), qp::luders_transition(a, n, c, al) / 4.0, 1e-14);
        }
    }
}

TEST(Wigner, MarginalsAndBruteForce) {
    qp::random::Engine rng(131);
    for (int trial = 0; trial < 30; ++trial) {
        const Index d = 2 + trial % 7;
        const DensityOperator rho = qp::random::density(d, rng);
        const Observable a = qp::random::observable(d, rng, "A");
        const Observable b = qp::random::observable(d, rng, "B");
        double total = 0.0;
        for (Index al = 0; al < d; ++al) {
            double col = 0.0;
            for (Index n = 0; n < d; ++n) {
                const double w = qp::wigner_distribution(rho, a, n, b, al);
                // Tr(rho P_a P_n P_a) = |<n|a>|^2 <a|rho|a>
                const double brute = std::norm(a.eigenvector(n).dot(b.eigenvector(al))) *
                                     sandwich(rho.matrix(), b.eigenvector(al));
                EXPECT_NEAR(w, brute, 1e-13);
                col += w;
            }
            EXPECT_NEAR(col, qp::born_probability(rho, b, al), 1e-12);
            total += col;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Kirkwood, CompatibleBasesAreRealDiagonal) {
    qp::random::Engine rng(137);
    const Observable a = qp::random::observable(3, rng, "A");
    const Observable b("B", {5.0, -1.0, 2.0}, a.eigenbasis());
    const DensityOperator rho = qp::random::density(3, rng);
    for (Index n = 0; n < 3; ++n) {
        for (Index al = 0; al < 3; ++al) {
            const Complex k = qp::kirkwood_form(rho, a, n, b, al);
            EXPECT_NEAR(k.imag(), 0.0, 1e-12);
            EXPECT_NEAR(k.real(), n == al ? qp::born_probability(rho, a, n) : 0.0, 1e-12);
        }
    }
}

TEST(Kirkwood, SumsToOneAndWitnessesComplexValues) {
    const DensityOperator psi = ket({kS, Complex(0.0, kS)});
    const Complex k = qp::kirkwood_form(psi, Observable::computational(2), 0, hadamard(), 0);
    EXPECT_NEAR(k.real(), 0.25, 1e-15);
    EXPECT_NEAR(k.imag(), 0.25, 1e-15);
    EXPECT_GT(std::abs(k.imag()), 0.01);

    qp::random::Engine rng(139);
    for (int trial = 0; trial < 20; ++trial) {
        const Index d = 2 + trial % 6;
        const DensityOperator rho = qp::random::density(d, rng);
        const Observable a = qp::random::observable(d, rng, "A");
        const Observable b = qp::random::observable(d, rng, "B");
        Complex sum = 0.0;
        for (Index n = 0; n < d; ++n)
            for (Index al = 0; al < d; ++al) {
                const Complex kk = qp::kirkwood_form(rho, a, n, b, al);
                // <P_n P_a> = <n|a> <a|rho|n>
                const ComplexVector vn = a.eigenvector(n);
                const ComplexVector va = b.eigenvector(al);
                const Complex brute = vn.dot(va) * va.dot(rho.matrix() * vn);
                EXPECT_NEAR(std::abs(kk - brute), 0.0, 1e-13);
                sum += kk;
            }
        EXPECT_NEAR(std::abs(sum - 1.0), 0.0, 1e-12);
    }
}

TEST(IdentityChain, CompatibleQubitAndDimFour) {
    qp::random::Engine rng(149);
    const Observable a = qp::random::observable(3, rng, "A");
    const DensityOperator rho3 = qp::random::density(3, rng);
    for (Index n = 0; n < 3; ++n) EXPECT_LE(qp::identity_chain_residual(rho3, a, n, a), 1e-14);

    const DensityOperator q = qp::random::density(2, rng);
    const Observable qa = qp::random::observable(2, rng, "A");
    const Observable qb = qp::random::observable(2, rng, "B");
    for (Index n = 0; n < 2; ++n) EXPECT_LE(qp::identity_chain_residual(q, qa, n, qb), 1e-12);

    const DensityOperator r4 = qp::random::density(4, rng);
    const Observable a4 = qp::random::observable(4, rng, "A");
    const Observable b4 = qp::random::observable(4, rng, "B");
    for (Index n = 0; n < 4; ++n) EXPECT_LE(qp::identity_chain_residual(r4, a4, n, b4), 1e-10);
}

TEST(IdentityChain, RandomInstances) {
    qp::random::Engine rng(151);
    for (int trial = 0; trial < 100; ++trial) {
        const Index d = 2 + trial % 7;
        const DensityOperator rho = qp::random::density(d, rng);
        const Observable a = qp::random::observable(d, rng, "A");
        const Observable b = qp::random::observable(d, rng, "B");
        for (Index n = 0; n < d; ++n) EXPECT_LE(qp::identity_chain_residual(rho, a, n, b), 1e-10);
    }
}
