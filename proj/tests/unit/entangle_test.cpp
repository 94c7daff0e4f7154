#include <qprospect/composite.hpp>
#include <qprospect/entangle.hpp>
#include <qprospect/numeric.hpp>
#include <qprospect/random.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace qp = qprospect;
using qp::ComplexMatrix;
using qp::ComplexVector;
using qp::CompositeState;
using qp::Dims;

TEST(Entanglement, ProductStatesProduceNone) {
    qp::random::Engine rng(401);
    for (qp::Index da = 2; da <= 6; ++da) {
        for (qp::Index db = 2; db <= 6; ++db) {
            const auto rho = CompositeState::product(qp::random::density(da, rng), qp::random::density(db, rng));
            const auto r = qp::entanglement_production(rho);
            EXPECT_NEAR(r.epsilon, 0.0, 1e-12) << da << "x" << db;
            EXPECT_NEAR(r.epsilon_spectral, 0.0, 1e-12) << da << "x" << db;
        }
    }
}

TEST(Entanglement, BellStates) {
    for (qp::Index m = 2; m <= 8; ++m) {
        const double lm = std::log(static_cast<double>(m));
        const auto r = qp::entanglement_production(qp::bell_state(m));
        EXPECT_NEAR(r.epsilon, lm, 1e-12);
        EXPECT_NEAR(r.epsilon_spectral, 2.0 * lm, 1e-12);
        const auto r2 = qp::entanglement_production(qp::bell_state(m), qp::LogBase::Two);
        EXPECT_NEAR(r2.epsilon, std::log2(static_cast<double>(m)), 1e-12);
        EXPECT_STREQ(qp::unit_name(r2.base), "bits");
    }
    EXPECT_THROW((void)qp::bell_state(1), qp::ValidationError);
}

TEST(Entanglement, BellStateHasNoInterferenceWithUniformB) {
    for (qp::Index m = 2; m <= 6; ++m) {
        for (const auto& pp : qp::prospect_lattice(qp::bell_state(m), ComplexVector::Ones(m), false)) {
            EXPECT_NEAR(pp.q, 0.0, 1e-15);
            EXPECT_NEAR(pp.f, 1.0 / static_cast<double>(m), 1e-15);
        }
    }
}

TEST(Entanglement, SpectralNormsMatchPowerIteration) {
    qp::random::Engine rng(403);
    for (int trial = 0; trial < 15; ++trial) {
        const Dims dims{2 + trial % 3, 2 + trial % 4};
        const auto rho = qp::random::mixed_composite(dims, rng);
        const auto r = qp::entanglement_production(rho);
        const double nab = oracle::power_iteration_norm(rho.matrix(), rng);
        const double na = oracle::power_iteration_norm(oracle::partial_trace_sum(rho.matrix(), dims.a, dims.b, true), rng);
        const double nb = oracle::power_iteration_norm(oracle::partial_trace_sum(rho.matrix(), dims.a, dims.b, false), rng);
        EXPECT_NEAR(r.spectral.ab, nab, 1e-9);
        EXPECT_NEAR(r.spectral.a, na, 1e-9);
        EXPECT_NEAR(r.spectral.b, nb, 1e-9);
        EXPECT_NEAR(r.epsilon_spectral, std::log(nab / (na * nb)), 1e-8);

        double max_diag = 0.0;
        for (qp::Index i = 0; i < dims.total(); ++i) max_diag = std::max(max_diag, rho.matrix()(i, i).real());
        EXPECT_EQ(r.basis.ab, max_diag);
    }
}

TEST(Entanglement, GenericEntangledStateShowsInterference) {
    // Nonzero entanglement together with nonzero interference on some prospect.
    qp::random::Engine rng(405);
    int with_interference = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const Dims dims{2 + trial % 3, 2 + trial % 2};
        const auto rho = qp::random::pure_composite(dims, rng);
        const auto r = qp::entanglement_production(rho);
        EXPECT_GT(r.epsilon_spectral, 0.0);
        double max_q = 0.0;
        for (const auto& pp : qp::prospect_lattice(rho, ComplexVector::Ones(dims.b), true))
            max_q = std::max(max_q, std::abs(pp.q));
        if (max_q > 0.01) ++with_interference;
    }
    EXPECT_GE(with_interference, 35);
}
