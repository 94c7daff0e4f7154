#include "qprospect_cli/runner.hpp"

#include <qprospect/channels.hpp>
#include <qprospect/composite.hpp>
#include <qprospect/dynamics.hpp>
#include <qprospect/entangle.hpp>
#include <qprospect/game.hpp>
#include <qprospect/measure.hpp>
#include <qprospect/numeric.hpp>

#include <functional>
#include <map>

namespace qprospect::cli {

namespace {

std::string idx(Index i) {
    return std::to_string(i);
}

template <class T>
const T& directive(const std::optional<T>& d, const std::string& command) {
    if (!d) throw ValidationError("resolved reference", "scenario has no run." + command + " directive");
    return *d;
}

template <class T>
const T& section(const std::optional<T>& d, const std::string& name) {
    if (!d) throw ValidationError("resolved reference", "scenario has no '" + name + "' section");
    return *d;
}

Observable observable(const Scenario& s, const std::string& name) {
    return make_observable(name, s.observables.at(name));
}

void run_born(const Scenario& s, ResultTable& t) {
    const BornRun& r = directive(s.run.born, "born");
    const DensityOperator rho = make_density(s.states.at(r.state));
    const Observable a = observable(s, r.observable);
    const auto dist = born_distribution(rho, a);
    for (std::size_t n = 0; n < dist.size(); ++n) {
        t.add("p(" + a.label() + "_" + std::to_string(n) + ")", dist[n], "born_probability");
    }
    t.add("E[" + a.label() + "]", expected_value(rho, a), "expected_value");
    t.add("argmax " + a.label(), static_cast<double>(most_probable(rho, a)), "most_probable");

    for (const auto& name : r.multimodes) {
        const MultimodeSpec& m = s.multimodes.at(name);
        const MultimodeState b(m.coefficients, observable(s, m.observable));
        const auto mp = multimode_probability(rho, b);
        t.add("p(" + name + ")", mp.p, "multimode_probability");
        t.add("p_classical(" + name + ")", mp.classical, "multimode_probability");
        t.add("p_quantum(" + name + ")", mp.quantum, "multimode_probability");
    }
    if (!r.povm.empty()) {
        std::vector<GeneralizedProposition> members;
        for (const auto& name : r.povm) {
            const MultimodeSpec& m = s.multimodes.at(name);
            members.emplace_back(MultimodeState(m.coefficients, observable(s, m.observable)));
        }
        const PovmReport rep = validate_povm(PovmFamily(std::move(members)), rho);
        t.add("povm residual", rep.residual, "validate_povm");
        t.add("povm passed", rep.passed ? 1.0 : 0.0, "validate_povm");
        if (rep.total_probability) t.add("povm total probability", *rep.total_probability, "validate_povm");
    }
}

void run_lueders(const Scenario& s, ResultTable& t) {
    const PairRun& r = directive(s.run.lueders, "lueders");
    const Observable a = observable(s, r.a);
    const Observable b = observable(s, r.b);
    const RealMatrix table = luders_transition_table(a, b);
    for (Index n = 0; n < table.rows(); ++n) {
        for (Index al = 0; al < table.cols(); ++al) {
            t.add("p_L(" + a.label() + "_" + idx(n) + "|" + b.label() + "_" + idx(al) + ")", table(n, al),
                  "luders_transition");
        }
    }
}

void run_wigner(const Scenario& s, ResultTable& t) {
    const PairRun& r = directive(s.run.wigner, "wigner");
    const DensityOperator rho = make_density(s.states.at(r.state));
    const Observable a = observable(s, r.a);
    const Observable b = observable(s, r.b);
    for (Index n = 0; n < a.dim(); ++n) {
        for (Index al = 0; al < b.dim(); ++al) {
            t.add("p_W(" + a.label() + "_" + idx(n) + "," + b.label() + "_" + idx(al) + ")",
                  wigner_distribution(rho, a, n, b, al), "wigner_distribution");
        }
    }
    for (Index n = 0; n < a.dim(); ++n) {
        t.add("chain residual(" + a.label() + "_" + idx(n) + ")", identity_chain_residual(rho, a, n, b),
              "identity_chain_residual");
    }
}

void run_kirkwood(const Scenario& s, ResultTable& t) {
    const PairRun& r = directive(s.run.kirkwood, "kirkwood");
    const DensityOperator rho = make_density(s.states.at(r.state));
    const Observable a = observable(s, r.a);
    const Observable b = observable(s, r.b);
    for (Index n = 0; n < a.dim(); ++n) {
        for (Index al = 0; al < b.dim(); ++al) {
            const Complex k = kirkwood_form(rho, a, n, b, al);
            const std::string tag = a.label() + "_" + idx(n) + "," + b.label() + "_" + idx(al);
            t.add("Re K(" + tag + ")", k.real(), "kirkwood_form");
            t.add("Im K(" + tag + ")", k.imag(), "kirkwood_form");
        }
    }
}

void run_joint(const Scenario& s, ResultTable& t) {
    const CompositeRun& r = directive(s.run.joint, "joint");
    const CompositeState rho = make_composite(s.states.at(r.state));
    const RealMatrix table = joint_table(rho);
    for (Index n = 0; n < table.rows(); ++n) {
        for (Index al = 0; al < table.cols(); ++al) {
            t.add("p(A_" + idx(n) + ",B_" + idx(al) + ")", table(n, al), "joint_probability");
        }
    }
    const Marginals m = marginals(rho);
    for (std::size_t n = 0; n < m.a.size(); ++n) t.add("p(A_" + std::to_string(n) + ")", m.a[n], "marginals");
    for (std::size_t al = 0; al < m.b.size(); ++al) t.add("p(B_" + std::to_string(al) + ")", m.b[al], "marginals");
    t.add("marginal residual", m.partial_trace_residual, "marginals");
    for (Index n = 0; n < table.rows(); ++n) {
        for (Index al = 0; al < table.cols(); ++al) {
            if (m.b[static_cast<std::size_t>(al)] <= tolerance::kDivisionGuard) continue;
            t.add("p(A_" + idx(n) + "|B_" + idx(al) + ")", bayes_conditional(rho, n, al), "bayes_conditional");
        }
    }
}

void run_prospect(const Scenario& s, ResultTable& t) {
    const CompositeRun& r = directive(s.run.prospect, "prospect");
    const CompositeState rho = make_composite(s.states.at(r.state));
    const ComplexVector& b = *r.b;
    const char* op = r.normalize ? "prospect_lattice" : "prospect_probability";
    const auto lattice = prospect_lattice(rho, b, r.normalize);
    double sum_q = 0.0;
    for (std::size_t n = 0; n < lattice.size(); ++n) {
        const std::string k = std::to_string(n);
        t.add("p(pi_" + k + ")", lattice[n].p, op);
        t.add("f(pi_" + k + ")", lattice[n].f, op);
        t.add("q(pi_" + k + ")", lattice[n].q, op);
        sum_q += lattice[n].q;
    }
    t.add("sum q", sum_q, op);
    const ResolutionResidual res = prospect_resolution_residual(rho.dims(), b);
    t.add("resolution residual (1_AB)", res.against_identity, "prospect_resolution_residual");
    t.add("resolution residual (1_A x P_B)", res.against_a_identity_times_pb, "prospect_resolution_residual");
}

void run_conditional(const Scenario& s, ResultTable& t) {
    const CompositeRun& r = directive(s.run.conditional, "conditional");
    const CompositeState rho = make_composite(s.states.at(r.state));
    for (Index n = 0; n < rho.dims().a; ++n) {
        t.add("p(A_" + idx(n) + "|B)", conditional_under_uncertainty(rho, Prospect(n, *r.b)),
              "conditional_under_uncertainty");
    }
}

void run_entanglement(const Scenario& s, ResultTable& t) {
    const CompositeRun& r = directive(s.run.entanglement, "entanglement");
    const auto rep = entanglement_production(make_composite(s.states.at(r.state)), r.base);
    const std::string unit = unit_name(rep.base);
    const char* op = "entanglement_production";
    t.add("epsilon [" + unit + "]", rep.epsilon, op);
    t.add("epsilon_spectral [" + unit + "]", rep.epsilon_spectral, op);
    t.add("norm rho_AB (basis)", rep.basis.ab, op);
    t.add("norm rho_A (basis)", rep.basis.a, op);
    t.add("norm rho_B (basis)", rep.basis.b, op);
    t.add("norm rho_AB (spectral)", rep.spectral.ab, op);
    t.add("norm rho_A (spectral)", rep.spectral.a, op);
    t.add("norm rho_B (spectral)", rep.spectral.b, op);
}

void run_pipeline_cmd(const Scenario& s, ResultTable& t) {
    const PipelineSpec& p = section(s.pipeline, "pipeline");
    const DensityOperator sys = make_density(s.states.at(p.system));
    const DensityOperator mes = make_density(s.states.at(p.measurer));
    std::vector<PipelineStage> stages;
    for (const auto& st : p.stages) {
        switch (st.kind) {
            case StageKind::Compose: stages.push_back(PipelineStage::compose()); break;
            case StageKind::Evolve: stages.push_back(PipelineStage::evolve(st.duration)); break;
            case StageKind::Readout: stages.push_back(PipelineStage::readout()); break;
            case StageKind::Transform: stages.push_back(PipelineStage::transform(st.transform)); break;
        }
    }
    const PipelineTrace trace = run_pipeline(sys, MeasurerSpec{mes, p.coupling}, stages);
    for (std::size_t k = 0; k < trace.stages.size(); ++k) {
        t.add("stage " + std::to_string(k) + " " + to_string(trace.stages[k].kind) + " time",
              trace.stages[k].time, "run_pipeline");
    }
    const ComplexMatrix& rs = trace.system.matrix();
    for (Index n = 0; n < rs.rows(); ++n) {
        t.add("rho_S(" + idx(n) + "," + idx(n) + ")", checked_probability(rs(n, n).real(), "rho_S diagonal"),
              "run_pipeline");
    }
    const ComplexMatrix& rm = trace.measurer.matrix();
    for (Index m = 0; m < rm.rows(); ++m) {
        t.add("rho_M(" + idx(m) + "," + idx(m) + ")", checked_probability(rm(m, m).real(), "rho_M diagonal"),
              "run_pipeline");
    }
    t.add("purity rho_S", trace.system.purity(), "run_pipeline");
}

InterferenceDistribution prior(const Scenario& s) {
    return s.interference ? make_distribution(*s.interference) : InterferenceDistribution::uniform();
}

void run_game(const Scenario& s, ResultTable& t, std::uint64_t seed) {
    const GameSection& g = section(s.game, "game");
    const GameSpec spec = make_game(g);
    const InterferenceDistribution dist = prior(s);
    const auto f = classical_prospects(spec);
    t.add("f(C)", f.first, "classical_prospects");
    t.add("f(D)", f.second, "classical_prospects");

    double q = 0.0;
    if (g.q) {
        q = *g.q;
    } else {
        q = quarter_law(dist).first;
        t.add("q+", q, "quarter_law");
    }
    GameResult res = broken_symmetry_probabilities(f, q, g.favored);
    t.add("q(C)", res.q_applied.first, "broken_symmetry_probabilities");
    t.add("q(D)", res.q_applied.second, "broken_symmetry_probabilities");
    t.add("p(C)", res.p.first, "broken_symmetry_probabilities");
    t.add("p(D)", res.p.second, "broken_symmetry_probabilities");
    if (g.empirical) {
        t.add("empirical p(C)", g.empirical->first, "reference");
        t.add("empirical p(D)", g.empirical->second, "reference");
        t.add("deviation C", std::abs(res.p.first - g.empirical->first), "broken_symmetry_probabilities");
        t.add("deviation D", std::abs(res.p.second - g.empirical->second), "broken_symmetry_probabilities");
    }
    if (g.cohort) {
        CohortOptions opts;
        opts.n_pairs = g.cohort->pairs;
        opts.symmetry = g.cohort->symmetry;
        opts.favored = g.favored;
        opts.mode = g.cohort->mode;
        opts.seed = seed;
        opts.workers = g.cohort->workers;
        const CohortReport c = monte_carlo_cohort(spec, dist, opts);
        const char* op = "monte_carlo_cohort";
        t.add("cohort pairs", static_cast<double>(c.n), op);
        t.add("cohort mean q", c.mean_q, op);
        t.add("cohort stderr q", c.stderr_q, op);
        t.add("cohort cooperation", c.cooperation_fraction, op);
        t.add("cohort stderr cooperation", c.stderr_cooperation, op);
    }
}

void run_quarter_law(const Scenario& s, ResultTable& t) {
    const auto [qp, qm] = quarter_law(prior(s));
    t.add("q+", qp, "quarter_law");
    t.add("q-", qm, "quarter_law");
}

void run_dynamics(const Scenario& s, ResultTable& t) {
    const DynamicsSpec& d = section(s.dynamics, "dynamics");
    const HamiltonianSpec h = make_hamiltonian(d);
    const WaveState psi0(d.psi0, d.t0);
    const WaveState psi_t = evolve_state(psi0, h, d.t);
    for (Index n = 0; n < psi_t.dim(); ++n) {
        t.add("|c_" + idx(n) + "(t)|^2", checked_probability(std::norm(psi_t.coefficients()(n)), "|c_n(t)|^2"),
              "evolve_state");
    }
    const TwoTimeAmplitudes amp = amplitude_matrix(psi0, h, d.t0, d.t);
    for (Index n = 0; n < amp.c.rows(); ++n) {
        for (Index al = 0; al < amp.c.cols(); ++al) {
            t.add("|c_" + idx(n) + idx(al) + "|^2", two_time_joint(amp.c, n, al), "two_time_joint");
        }
    }
    for (Index n = 0; n < amp.row_residual.size(); ++n) {
        t.add("row residual " + idx(n), amp.row_residual(n), "amplitude_matrix");
    }
    const RealVector cols = amp.c.column_norms();
    for (Index al = 0; al < cols.size(); ++al) t.add("column norm " + idx(al), cols(al), "amplitude_matrix");
    if (d.multimode) {
        for (Index n = 0; n < amp.c.rows(); ++n) {
            const ProspectProbability pp = two_time_prospect(amp.c, n, *d.multimode);
            t.add("p(pi_" + idx(n) + ")", pp.p, "two_time_prospect");
            t.add("f(pi_" + idx(n) + ")", pp.f, "two_time_prospect");
            t.add("q(pi_" + idx(n) + ")", pp.q, "two_time_prospect");
        }
    }
}

}  // namespace

const std::vector<std::string>& scenario_commands() {
    static const std::vector<std::string> names{"born",     "lueders",      "wigner", "kirkwood",    "joint",
                                                "prospect", "conditional",  "pipeline", "entanglement", "game",
                                                "quarter-law", "dynamics"};
    return names;
}

ResultTable run(const std::string& command, const Scenario& scenario, std::uint64_t seed) {
    using Handler = std::function<void(const Scenario&, ResultTable&)>;
    static const std::map<std::string, Handler> handlers{
        {"born", run_born},
        {"lueders", run_lueders},
        {"wigner", run_wigner},
        {"kirkwood", run_kirkwood},
        {"joint", run_joint},
        {"prospect", run_prospect},
        {"conditional", run_conditional},
        {"pipeline", run_pipeline_cmd},
        {"entanglement", run_entanglement},
        {"quarter-law", run_quarter_law},
        {"dynamics", run_dynamics},
    };
    const ToleranceScope scope(scenario.settings.tolerance);
    ResultTable table;
    table.command = command;
    table.scenario_name = scenario.name;
    table.seed = seed;
    table.tolerance = tolerance::operator_tolerance();
    if (command == "game") {
        run_game(scenario, table, seed);
        return table;
    }
    const auto it = handlers.find(command);
    if (it == handlers.end()) throw ValidationError("subcommand", "unknown subcommand '" + command + "'");
    it->second(scenario, table);
    return table;
}

}  // namespace qprospect::cli
