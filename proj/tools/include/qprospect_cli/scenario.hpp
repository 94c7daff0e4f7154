// Declarative scenario files for the qprospect tool.
//
// A Scenario keeps what the file said (not the library objects built from it),
// so serialize_scenario can write it back and a re-parse compares equal.

#pragma once

#include <qprospect/channels.hpp>
#include <qprospect/dynamics.hpp>
#include <qprospect/entangle.hpp>
#include <qprospect/game.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qprospect::cli {

struct StateSpec {
    enum class Kind { Pure, Density, Composite, Amplitudes, Bell };
    Kind kind = Kind::Pure;
    ComplexVector vector;  // Pure
    ComplexMatrix matrix;  // Density, Composite, Amplitudes
    Dims dims;             // Composite
    Index modes = 0;       // Bell

    bool is_composite() const noexcept;
    friend bool operator==(const StateSpec&, const StateSpec&);
};

struct ObservableSpec {
    Index computational = 0;  // > 0: computational basis of this dimension
    std::vector<double> eigenvalues;
    ComplexMatrix eigenbasis;

    friend bool operator==(const ObservableSpec&, const ObservableSpec&);
};

struct MultimodeSpec {
    ComplexVector coefficients;
    std::string observable;

    friend bool operator==(const MultimodeSpec&, const MultimodeSpec&);
};

struct StageSpec {
    StageKind kind = StageKind::Compose;
    double duration = 0.0;
    ComplexMatrix transform;  // Transform only

    friend bool operator==(const StageSpec&, const StageSpec&);
};

struct PipelineSpec {
    std::string system;
    std::string measurer;
    ComplexMatrix coupling;
    std::vector<StageSpec> stages;

    friend bool operator==(const PipelineSpec&, const PipelineSpec&);
};

struct CohortSpec {
    std::uint64_t pairs = 0;
    Symmetry symmetry = Symmetry::Broken;
    BrokenMode mode = BrokenMode::Sampled;
    unsigned workers = 1;

    friend bool operator==(const CohortSpec&, const CohortSpec&) = default;
};

struct GameSection {
    std::array<double, 4> joint{};
    std::optional<std::array<double, 4>> payoffs;
    bool require_dilemma = false;
    std::optional<double> q;  // absent: quarter law of the interference prior
    Favored favored = Favored::Cooperate;
    std::optional<std::pair<double, double>> empirical;
    std::optional<CohortSpec> cohort;

    friend bool operator==(const GameSection&, const GameSection&) = default;
};

struct InterferenceSpec {
    bool uniform = true;
    std::vector<double> knots;
    std::vector<double> density;

    friend bool operator==(const InterferenceSpec&, const InterferenceSpec&) = default;
};

struct PieceSpec {
    double start = 0.0;
    ComplexMatrix v;
};

struct DynamicsSpec {
    ComplexMatrix h0;
    std::vector<PieceSpec> pieces;
    ComplexVector psi0;
    double t0 = 0.0;
    double t = 0.0;
    std::optional<ComplexVector> multimode;

    friend bool operator==(const DynamicsSpec&, const DynamicsSpec&);
};

struct BornRun {
    std::string state;
    std::string observable;
    std::vector<std::string> multimodes;
    std::vector<std::string> povm;

    friend bool operator==(const BornRun&, const BornRun&) = default;
};

struct PairRun {
    std::string state;  // unused by lueders
    std::string a;
    std::string b;

    friend bool operator==(const PairRun&, const PairRun&) = default;
};

struct CompositeRun {
    std::string state;
    std::optional<ComplexVector> b;  // multimode coefficients over the B factor
    bool normalize = true;
    LogBase base = LogBase::Natural;

    friend bool operator==(const CompositeRun&, const CompositeRun&);
};

struct RunDirectives {
    std::optional<BornRun> born;
    std::optional<PairRun> lueders;
    std::optional<PairRun> wigner;
    std::optional<PairRun> kirkwood;
    std::optional<CompositeRun> joint;
    std::optional<CompositeRun> prospect;
    std::optional<CompositeRun> conditional;
    std::optional<CompositeRun> entanglement;

    friend bool operator==(const RunDirectives&, const RunDirectives&) = default;
};

struct Settings {
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;

    friend bool operator==(const Settings&, const Settings&) = default;
};

struct Scenario {
    std::string name;
    Settings settings;
    std::map<std::string, StateSpec> states;
    std::map<std::string, ObservableSpec> observables;
    std::map<std::string, MultimodeSpec> multimodes;
    std::optional<PipelineSpec> pipeline;
    std::optional<GameSection> game;
    std::optional<InterferenceSpec> interference;
    std::optional<DynamicsSpec> dynamics;
    RunDirectives run;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses and validates. Errors are ValidationError with the field path (or
/// line and column for syntax errors) in the message.
Scenario parse_scenario(std::string_view text);

/// Reads a file and parses it; an unreadable file is a ValidationError.
Scenario load_scenario(const std::string& path);

std::string serialize_scenario(const Scenario& scenario);

// Library objects built from the specs. Callers have validated the scenario.
DensityOperator make_density(const StateSpec& spec);
CompositeState make_composite(const StateSpec& spec);
Observable make_observable(const std::string& label, const ObservableSpec& spec);
InterferenceDistribution make_distribution(const InterferenceSpec& spec);
GameSpec make_game(const GameSection& spec);
HamiltonianSpec make_hamiltonian(const DynamicsSpec& spec);

/// Sets the operator tolerance for its lifetime and restores the old value.
class ToleranceScope {
public:
    explicit ToleranceScope(std::optional<double> tol);
    ~ToleranceScope();
    ToleranceScope(const ToleranceScope&) = delete;
    ToleranceScope& operator=(const ToleranceScope&) = delete;

private:
    double previous_;
};

}  // namespace qprospect::cli
