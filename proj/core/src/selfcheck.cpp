#include "qprospect/selfcheck.hpp"

#include "qprospect/channels.hpp"
#include "qprospect/composite.hpp"
#include "qprospect/dynamics.hpp"
#include "qprospect/entangle.hpp"
#include "qprospect/game.hpp"
#include "qprospect/measure.hpp"
#include "qprospect/numeric.hpp"
#include "qprospect/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qprospect::selfcheck {

namespace {

constexpr std::uint64_t kSeed = 20260416;
constexpr std::uint64_t kCohortSize = 1'000'000;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

Observable hadamard_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix h(2, 2);
    h << s, s, s, -s;
    return Observable("hadamard", {1.0, -1.0}, h);
}

GameSpec dilemma_game() {
    return GameSpec({0.05, 0.05, 0.45, 0.45}, Payoffs{3.0, 0.0, 5.0, 1.0}, true);
}

CriterionResult quarter_law_uniform() {
    const auto [qp, qm] = quarter_law(InterferenceDistribution::uniform());
    const double err = std::max(std::abs(qp - 0.25), std::abs(qm + 0.25));
    return {1, "quarter law for the uniform prior", err <= 1e-10,
            "q+ = " + num(qp) + ", q- = " + num(qm) + ", max error " + fmt(err)};
}

CriterionResult game_reproduction() {
    const auto f = classical_prospects(dilemma_game());
    const GameResult r = broken_symmetry_probabilities(f, 0.25, Favored::Cooperate);
    const double exact = std::max(std::abs(r.p.first - 0.35), std::abs(r.p.second - 0.65));
    const double dev = std::max(std::abs(r.p.first - 0.37), std::abs(r.p.second - 0.63));
    const bool ok = exact <= 1e-12 && dev <= 0.02 + 1e-12;
    return {2, "prisoner dilemma reproduction (0.35, 0.65)", ok,
            "p = (" + num(r.p.first) + ", " + num(r.p.second) + "), error " + fmt(exact) +
                ", deviation from (0.37, 0.63) = " + num(dev)};
}

CriterionResult monte_carlo_consistency() {
    const GameSpec spec = dilemma_game();
    const auto dist = InterferenceDistribution::uniform();
    const double fixed_value =
        broken_symmetry_probabilities(classical_prospects(spec), quarter_law(dist).first, Favored::Cooperate)
            .p.first;

    CohortOptions broken{kCohortSize, Symmetry::Broken, Favored::Cooperate, BrokenMode::Sampled, kSeed, 4};
    const CohortReport b = monte_carlo_cohort(spec, dist, broken);
    CohortOptions intact{kCohortSize, Symmetry::Intact, Favored::Cooperate, BrokenMode::Sampled, kSeed + 1, 4};
    const CohortReport i = monte_carlo_cohort(spec, dist, intact);

    const double gap = std::abs(b.cooperation_fraction - fixed_value);
    const bool ok = gap <= 0.002 && std::abs(i.mean_q) <= 3.0 * i.stderr_q;
    return {3, "Monte Carlo cohort consistency", ok,
            "broken cooperation " + num(b.cooperation_fraction) + " vs " + num(fixed_value) +
                " (gap " + fmt(gap) + "); intact mean q " + fmt(i.mean_q) + ", 3*stderr " + fmt(3.0 * i.stderr_q)};
}

CriterionResult bell_entanglement() {
    double worst = 0.0;
    double eps2 = 0.0;
    for (Index m = 2; m <= 8; ++m) {
        const auto r = entanglement_production(bell_state(m));
        worst = std::max(worst, std::abs(r.epsilon - std::log(static_cast<double>(m))));
        if (m == 2) eps2 = r.epsilon;
    }
    const bool ok = worst <= 1e-12 && std::abs(eps2 - 0.693147) <= 5e-7;
    return {4, "Bell entanglement production eps = log M", ok,
            "max |eps - ln M| = " + fmt(worst) + ", eps(M=2) = " + num(eps2) + " nats"};
}

CriterionResult bell_interference_nullity() {
    double worst_q = 0.0;
    double min_eps = 1e300;
    for (Index m = 2; m <= 8; ++m) {
        const CompositeState bell = bell_state(m);
        const ComplexVector b = ComplexVector::Ones(m);
        for (Index n = 0; n < m; ++n) {
            worst_q = std::max(worst_q, std::abs(prospect_probability(bell, Prospect(n, b)).q));
        }
        min_eps = std::min(min_eps, entanglement_production(bell).epsilon);
    }
    return {5, "Bell interference vanishes while eps > 0", worst_q <= 1e-12 && min_eps > 0.0,
            "max |q| = " + fmt(worst_q) + ", min eps = " + num(min_eps)};
}

CriterionResult luders_symmetry() {
    random::Engine rng(kSeed + 6);
    double asym = 0.0;
    double stoch = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Index d = 2 + trial % 7;
        const Observable a = random::observable(d, rng, "A");
        const Observable b = random::observable(d, rng, "B");
        const RealMatrix t = luders_transition_table(a, b);
        for (Index n = 0; n < d; ++n)
            for (Index al = 0; al < d; ++al)
                asym = std::max(asym, std::abs(t(n, al) - luders_transition(b, al, a, n)));
        stoch = std::max({stoch, (t.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                          (t.colwise().sum().array() - 1.0).abs().maxCoeff()});
    }
    return {6, "Lueders transition symmetry and double stochasticity", asym <= 1e-14 && stoch <= 1e-12,
            "max asymmetry " + fmt(asym) + ", max row/column deviation " + fmt(stoch)};
}

CriterionResult compatible_trivialization() {
    random::Engine rng(kSeed + 7);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Index d = 2 + trial % 7;
        const Observable a = random::observable(d, rng, "A");
        const Observable b("B", a.eigenvalues(), a.eigenbasis());
        const DensityOperator rho = random::density(d, rng);
        for (Index n = 0; n < d; ++n) {
            for (Index al = 0; al < d; ++al) {
                const double delta = n == al ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(luders_transition(a, n, b, al) - delta));
                worst = std::max(worst, std::abs(wigner_distribution(rho, a, n, b, al) -
                                                 delta * born_probability(rho, b, al)));
            }
        }
    }
    return {7, "compatible observables trivialise p_L and p_W", worst <= 1e-12, "max deviation " + fmt(worst)};
}

CriterionResult identity_chain() {
    random::Engine rng(kSeed + 8);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Index d = 2 + trial % 7;
        const DensityOperator rho = random::density(d, rng);
        const Observable a = random::observable(d, rng, "A");
        const Observable b = random::observable(d, rng, "B");
        for (Index n = 0; n < d; ++n) worst = std::max(worst, identity_chain_residual(rho, a, n, b));
    }
    return {8, "identity-chain residual", worst <= 1e-10, "max residual " + fmt(worst)};
}

CriterionResult composite_measure() {
    random::Engine rng(kSeed + 9);
    double table_err = 0.0;
    double min_entry = 1.0;
    double bayes_err = 0.0;
    double marg_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Dims dims{2 + trial % 4, 2 + (trial / 4) % 4};
        const CompositeState rho =
            trial % 2 == 0 ? random::pure_composite(dims, rng) : random::mixed_composite(dims, rng);
        const RealMatrix t = joint_table(rho);
        table_err = std::max(table_err, std::abs(t.sum() - 1.0));
        min_entry = std::min(min_entry, t.minCoeff());
        for (Index al = 0; al < dims.b; ++al) {
            double s = 0.0;
            for (Index n = 0; n < dims.a; ++n) s += bayes_conditional(rho, n, al);
            bayes_err = std::max(bayes_err, std::abs(s - 1.0));
        }
        marg_err = std::max(marg_err, marginals(rho).partial_trace_residual);
    }
    const bool ok = table_err <= 1e-12 && min_entry >= 0.0 && bayes_err <= 1e-10 && marg_err <= 1e-12;
    return {9, "composite probabilities form a measure", ok,
            "table sum error " + fmt(table_err) + ", min entry " + fmt(min_entry) + ", Bayes sum error " +
                fmt(bayes_err) + ", marginal route gap " + fmt(marg_err)};
}

CriterionResult prospect_decomposition() {
    random::Engine rng(kSeed + 10);
    double split_err = 0.0;
    double sum_q = 0.0;
    double q_excess = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Dims dims{2 + trial % 4, 2 + (trial / 4) % 4};
        const CompositeState rho = random::pure_composite(dims, rng);
        const ComplexVector b = random::gaussian_vector(dims.b, rng);
        for (Index n = 0; n < dims.a; ++n) {
            const auto pp = prospect_probability(rho, Prospect(n, b));
            split_err = std::max(split_err, std::abs(pp.p - (pp.f + pp.q)));
        }
        const auto lattice = prospect_lattice(rho, b, true);
        double s = 0.0;
        for (const auto& pp : lattice) {
            s += pp.q;
            split_err = std::max(split_err, std::abs(pp.p - (pp.f + pp.q)));
            q_excess = std::max(q_excess, std::abs(pp.q) - 1.0);
        }
        sum_q = std::max(sum_q, std::abs(s));
    }
    const bool ok = split_err <= 1e-12 && sum_q <= 1e-10 && q_excess <= 0.0;
    return {10, "prospect decomposition p = f + q, sum q = 0", ok,
            "max |p - f - q| " + fmt(split_err) + ", max |sum q| " + fmt(sum_q)};
}

CriterionResult pipeline_fidelity() {
    random::Engine rng(kSeed + 11);
    ComplexMatrix sz(2, 2), sx(2, 2);
    sz << 1, 0, 0, -1;
    sx << 0, 1, 1, 0;
    const MeasurerSpec pointer{DensityOperator::from_pure(ComplexVector::Unit(2, 0)), tensor_product(sz, sx)};
    const Observable z = Observable::computational(2, "Z");

    double born_err = 0.0;
    double identity_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const DensityOperator rho = random::density(2, rng);
        const auto born = born_distribution(rho, z);
        for (double t : {std::numbers::pi / 2.0, std::numbers::pi / 4.0}) {
            const auto trace = run_pipeline(
                rho, pointer, {PipelineStage::compose(), PipelineStage::evolve(t), PipelineStage::readout()});
            for (Index n = 0; n < 2; ++n)
                born_err = std::max(born_err, std::abs(trace.system.matrix()(n, n).real() - born[n]));
        }
        const auto idle = run_pipeline(rho, pointer,
                                       {PipelineStage::compose(), PipelineStage::evolve(0.0), PipelineStage::readout(),
                                        PipelineStage::evolve(0.0), PipelineStage::transform(identity(2)),
                                        PipelineStage::readout()});
        identity_err = std::max(identity_err, max_abs_diff(idle.system.matrix(), rho.matrix()));
    }
    return {11, "pipeline reproduces Born statistics; idle pipeline is identity",
            born_err <= 1e-10 && identity_err <= 1e-12,
            "max Born gap " + fmt(born_err) + ", idle pipeline gap " + fmt(identity_err)};
}

CriterionResult dynamics_oracle() {
    const double g = 0.7;
    ComplexMatrix coupling(2, 2);
    coupling << 0, g, g, 0;
    // Resonant drive: zero detuning, the coupling switched on in ten equal pieces.
    std::vector<PotentialPiece> pieces;
    for (int k = 0; k < 10; ++k) pieces.push_back({0.5 * k, coupling});
    const HamiltonianSpec h(ComplexMatrix::Zero(2, 2), pieces);
    const WaveState psi0(ComplexVector::Unit(2, 0), 0.0);

    double rabi_err = 0.0;
    for (int k = 1; k <= 50; ++k) {
        const double t = 0.13 * k;
        const auto psi = evolve_state(psi0, h, t);
        rabi_err = std::max(rabi_err, std::abs(std::norm(psi.coefficients()(1)) - std::pow(std::sin(g * t), 2)));
    }

    random::Engine rng(kSeed + 12);
    double col_err = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const WaveState start(random::unit_vector(2, rng), 0.0);
        const auto amp = amplitude_matrix(start, h, 0.3, 0.3 + std::numbers::pi / (2.0 * g));
        const auto at_t0 = evolve_state(start, h, 0.3);
        col_err = std::max(col_err,
                           (amp.c.column_norms() - at_t0.coefficients().cwiseAbs2()).cwiseAbs().maxCoeff());
    }
    return {12, "Rabi oracle and amplitude column norms", rabi_err <= 1e-8 && col_err <= 1e-10,
            "max |c1|^2 error " + fmt(rabi_err) + ", column-norm gap " + fmt(col_err)};
}

CriterionResult kirkwood_witness() {
    ComplexVector psi(2);
    psi << 1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0));
    const DensityOperator rho = DensityOperator::from_pure(psi);
    const Complex k = kirkwood_form(rho, Observable::computational(2, "Z"), 0, hadamard_basis(), 0);
    return {13, "Kirkwood form is complex for incompatible observables", std::abs(k.imag()) > 0.01,
            "<P_0 P_+> = " + num(k.real()) + " + " + num(k.imag()) + "i"};
}

CriterionResult guarded(int id, const char* name, const std::function<CriterionResult()>& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {id, name, false, std::string("exception: ") + e.what()};
    }
}

}  // namespace

std::vector<CriterionResult> run_all() {
    return {
        guarded(1, "quarter law", quarter_law_uniform),
        guarded(2, "game reproduction", game_reproduction),
        guarded(3, "Monte Carlo", monte_carlo_consistency),
        guarded(4, "Bell entanglement", bell_entanglement),
        guarded(5, "Bell interference", bell_interference_nullity),
        guarded(6, "Lueders symmetry", luders_symmetry),
        guarded(7, "compatible trivialization", compatible_trivialization),
        guarded(8, "identity chain", identity_chain),
        guarded(9, "composite measure", composite_measure),
        guarded(10, "prospect decomposition", prospect_decomposition),
        guarded(11, "pipeline fidelity", pipeline_fidelity),
        guarded(12, "dynamics oracle", dynamics_oracle),
        guarded(13, "Kirkwood witness", kirkwood_witness),
    };
}

bool print_report(const std::vector<CriterionResult>& results, std::ostream& out) {
    bool all = true;
    for (const auto& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << "#" << r.id << " " << r.name << ": " << r.detail << '\n';
        all = all && r.passed;
    }
    out << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
    return all;
}

}  // namespace qprospect::selfcheck
