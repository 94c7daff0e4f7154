#include "qprospect_cli/scenario.hpp"

#include <qprospect/numeric.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

namespace qprospect::cli {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool same(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same(const ComplexVector& a, const ComplexVector& b) {
    return a.size() == b.size() && (a.size() == 0 || a == b);
}

[[noreturn]] void fail(const std::string& path, const std::string& message,
                       const std::string& constraint = "schema") {
    throw ValidationError(constraint, path + ": " + message);
}

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string item(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

// Library validation errors keep their constraint name and gain the field path.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ValidationError& e) {
        throw ValidationError(e.constraint(), path + ": " + e.what());
    }
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) fail(path, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items()) {
        if (!allowed.count(k)) fail(child(path, k), "unknown field");
    }
}

const json& required(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(child(path, key), "missing required field");
    return *it;
}

const json* optional_field(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "number is not finite", "finite entries");
    return v;
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) fail(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

Index positive_count(const json& j, const std::string& path) {
    const std::uint64_t v = unsigned_integer(j, path);
    if (v == 0 || v > static_cast<std::uint64_t>(kMaxDimension)) {
        fail(path, "expected an integer in [1, " + std::to_string(kMaxDimension) + "]", "size limit");
    }
    return static_cast<Index>(v);
}

Complex complex_number(const json& j, const std::string& path) {
    if (j.is_number()) return {number(j, path), 0.0};
    if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number [re, im]");
    return {number(j[0], item(path, 0)), number(j[1], item(path, 1))};
}

std::vector<double> reals(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], item(path, i)));
    return out;
}

template <std::size_t N>
std::array<double, N> fixed_reals(const json& j, const std::string& path) {
    const auto v = reals(j, path);
    if (v.size() != N) fail(path, "expected " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = v[i];
    return out;
}

ComplexVector complex_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of complex numbers");
    ComplexVector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_number(j[i], item(path, i));
    return v;
}

ComplexMatrix complex_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) fail(item(path, 0), "expected a non-empty row");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rp = item(path, r);
        if (!j[r].is_array() || j[r].size() != cols) {
            fail(rp, "row length differs from row 0", "shape");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Index>(r), static_cast<Index>(c)) = complex_number(j[r][c], item(rp, c));
        }
    }
    return m;
}

std::vector<std::string> names(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of names");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(text(j[i], item(path, i)));
    return out;
}

// --- enum spellings --------------------------------------------------------

const char* kind_name(StateSpec::Kind k) {
    switch (k) {
        case StateSpec::Kind::Pure: return "pure";
        case StateSpec::Kind::Density: return "density";
        case StateSpec::Kind::Composite: return "composite";
        case StateSpec::Kind::Amplitudes: return "amplitudes";
        case StateSpec::Kind::Bell: return "bell";
    }
    return "pure";
}

StageKind stage_kind(const std::string& s, const std::string& path) {
    if (s == "compose") return StageKind::Compose;
    if (s == "evolve") return StageKind::Evolve;
    if (s == "readout") return StageKind::Readout;
    if (s == "transform") return StageKind::Transform;
    fail(path, "unknown stage kind '" + s + "'");
}

// --- sections ---------------------------------------------------------------

StateSpec parse_state(const json& j, const std::string& path) {
    const std::string kind = text(required(j, path, "kind"), child(path, "kind"));
    StateSpec s;
    if (kind == "pure") {
        allow_keys(j, path, {"kind", "vector"});
        s.kind = StateSpec::Kind::Pure;
        s.vector = complex_vector(required(j, path, "vector"), child(path, "vector"));
        const double n2 = s.vector.squaredNorm();
        if (std::abs(n2 - 1.0) > tolerance::operator_tolerance()) {
            std::ostringstream os;
            os.precision(17);
            os << "state vector has norm^2 " << n2 << ", expected 1";
            fail(child(path, "vector"), os.str(), "unit norm");
        }
    } else if (kind == "density") {
        allow_keys(j, path, {"kind", "matrix"});
        s.kind = StateSpec::Kind::Density;
        s.matrix = complex_matrix(required(j, path, "matrix"), child(path, "matrix"));
    } else if (kind == "composite") {
        allow_keys(j, path, {"kind", "dims", "matrix"});
        s.kind = StateSpec::Kind::Composite;
        const auto d = reals(required(j, path, "dims"), child(path, "dims"));
        const json& dj = j["dims"];
        if (d.size() != 2) fail(child(path, "dims"), "expected [dim_A, dim_B]", "shape");
        s.dims = Dims{positive_count(dj[0], item(child(path, "dims"), 0)),
                      positive_count(dj[1], item(child(path, "dims"), 1))};
        s.matrix = complex_matrix(required(j, path, "matrix"), child(path, "matrix"));
    } else if (kind == "amplitudes") {
        allow_keys(j, path, {"kind", "matrix"});
        s.kind = StateSpec::Kind::Amplitudes;
        s.matrix = complex_matrix(required(j, path, "matrix"), child(path, "matrix"));
    } else if (kind == "bell") {
        allow_keys(j, path, {"kind", "modes"});
        s.kind = StateSpec::Kind::Bell;
        s.modes = positive_count(required(j, path, "modes"), child(path, "modes"));
    } else {
        fail(child(path, "kind"), "unknown state kind '" + kind + "'");
    }
    // Construct once so invariant violations surface with this path.
    at_path(path, [&] {
        if (s.is_composite()) {
            (void)make_composite(s);
        } else {
            (void)make_density(s);
        }
        return 0;
    });
    return s;
}

ObservableSpec parse_observable(const std::string& label, const json& j, const std::string& path) {
    allow_keys(j, path, {"computational", "eigenvalues", "eigenbasis"});
    ObservableSpec o;
    if (const json* c = optional_field(j, "computational")) {
        if (optional_field(j, "eigenvalues") || optional_field(j, "eigenbasis")) {
            fail(path, "give either 'computational' or 'eigenvalues' with 'eigenbasis'");
        }
        o.computational = positive_count(*c, child(path, "computational"));
    } else {
        o.eigenvalues = reals(required(j, path, "eigenvalues"), child(path, "eigenvalues"));
        o.eigenbasis = complex_matrix(required(j, path, "eigenbasis"), child(path, "eigenbasis"));
    }
    at_path(path, [&] { return make_observable(label, o); });
    return o;
}

StageSpec parse_stage(const json& j, const std::string& path) {
    allow_keys(j, path, {"kind", "duration", "matrix"});
    StageSpec s;
    s.kind = stage_kind(text(required(j, path, "kind"), child(path, "kind")), child(path, "kind"));
    if (s.kind == StageKind::Evolve) {
        s.duration = number(required(j, path, "duration"), child(path, "duration"));
        if (s.duration < 0.0) fail(child(path, "duration"), "duration must be >= 0", "forward time");
    } else if (optional_field(j, "duration")) {
        fail(child(path, "duration"), "only evolve stages take a duration");
    }
    if (s.kind == StageKind::Transform) {
        s.transform = complex_matrix(required(j, path, "matrix"), child(path, "matrix"));
    } else if (optional_field(j, "matrix")) {
        fail(child(path, "matrix"), "only transform stages take a matrix");
    }
    return s;
}

Symmetry symmetry_of(const std::string& s, const std::string& path) {
    if (s == "broken") return Symmetry::Broken;
    if (s == "intact") return Symmetry::Intact;
    fail(path, "expected 'broken' or 'intact'");
}

BrokenMode mode_of(const std::string& s, const std::string& path) {
    if (s == "sampled") return BrokenMode::Sampled;
    if (s == "fixed") return BrokenMode::Fixed;
    fail(path, "expected 'sampled' or 'fixed'");
}

Favored favored_of(const std::string& s, const std::string& path) {
    if (s == "cooperate") return Favored::Cooperate;
    if (s == "defect") return Favored::Defect;
    fail(path, "expected 'cooperate' or 'defect'");
}

GameSection parse_game(const json& j, const std::string& path) {
    allow_keys(j, path, {"joint", "payoffs", "require_dilemma", "q", "favored", "empirical", "cohort"});
    GameSection g;
    g.joint = fixed_reals<4>(required(j, path, "joint"), child(path, "joint"));
    if (const json* p = optional_field(j, "payoffs")) g.payoffs = fixed_reals<4>(*p, child(path, "payoffs"));
    if (const json* r = optional_field(j, "require_dilemma")) {
        g.require_dilemma = boolean(*r, child(path, "require_dilemma"));
    }
    if (const json* q = optional_field(j, "q")) {
        g.q = number(*q, child(path, "q"));
        if (*g.q < 0.0 || *g.q > 1.0) fail(child(path, "q"), "interference magnitude must lie in [0, 1]", "range");
    }
    if (const json* f = optional_field(j, "favored")) {
        g.favored = favored_of(text(*f, child(path, "favored")), child(path, "favored"));
    }
    if (const json* e = optional_field(j, "empirical")) {
        const auto v = fixed_reals<2>(*e, child(path, "empirical"));
        g.empirical = std::make_pair(v[0], v[1]);
    }
    if (const json* c = optional_field(j, "cohort")) {
        const std::string cp = child(path, "cohort");
        allow_keys(*c, cp, {"pairs", "symmetry", "mode", "workers"});
        CohortSpec cs;
        cs.pairs = unsigned_integer(required(*c, cp, "pairs"), child(cp, "pairs"));
        if (cs.pairs == 0) fail(child(cp, "pairs"), "cohort must be non-empty", "range");
        if (const json* s = optional_field(*c, "symmetry")) {
            cs.symmetry = symmetry_of(text(*s, child(cp, "symmetry")), child(cp, "symmetry"));
        }
        if (const json* m = optional_field(*c, "mode")) cs.mode = mode_of(text(*m, child(cp, "mode")), child(cp, "mode"));
        if (const json* w = optional_field(*c, "workers")) {
            const std::uint64_t workers = unsigned_integer(*w, child(cp, "workers"));
            if (workers == 0 || workers > 256) fail(child(cp, "workers"), "expected 1..256 workers", "range");
            cs.workers = static_cast<unsigned>(workers);
        }
        g.cohort = cs;
    }
    at_path(path, [&] { return make_game(g); });
    return g;
}

InterferenceSpec parse_interference(const json& j, const std::string& path) {
    const std::string kind = text(required(j, path, "kind"), child(path, "kind"));
    InterferenceSpec s;
    if (kind == "uniform") {
        allow_keys(j, path, {"kind"});
    } else if (kind == "tabulated") {
        allow_keys(j, path, {"kind", "knots", "density"});
        s.uniform = false;
        s.knots = reals(required(j, path, "knots"), child(path, "knots"));
        s.density = reals(required(j, path, "density"), child(path, "density"));
    } else {
        fail(child(path, "kind"), "unknown interference prior '" + kind + "'");
    }
    at_path(path, [&] { return make_distribution(s); });
    return s;
}

DynamicsSpec parse_dynamics(const json& j, const std::string& path) {
    allow_keys(j, path, {"h0", "pieces", "psi0", "t0", "t", "multimode"});
    DynamicsSpec d;
    d.h0 = complex_matrix(required(j, path, "h0"), child(path, "h0"));
    if (const json* p = optional_field(j, "pieces")) {
        const std::string pp = child(path, "pieces");
        if (!p->is_array()) fail(pp, "expected an array of pieces");
        for (std::size_t i = 0; i < p->size(); ++i) {
            const std::string ip = item(pp, i);
            allow_keys((*p)[i], ip, {"start", "v"});
            d.pieces.push_back(PieceSpec{number(required((*p)[i], ip, "start"), child(ip, "start")),
                                         complex_matrix(required((*p)[i], ip, "v"), child(ip, "v"))});
        }
    }
    d.psi0 = complex_vector(required(j, path, "psi0"), child(path, "psi0"));
    d.t0 = number(required(j, path, "t0"), child(path, "t0"));
    d.t = number(required(j, path, "t"), child(path, "t"));
    if (!(d.t > d.t0)) fail(child(path, "t"), "requires t0 < t", "time order");
    if (const json* m = optional_field(j, "multimode")) d.multimode = complex_vector(*m, child(path, "multimode"));

    const HamiltonianSpec h = at_path(path, [&] { return make_hamiltonian(d); });
    at_path(child(path, "psi0"), [&] { return WaveState(d.psi0, d.t0); });
    if (d.psi0.size() != h.dim()) fail(child(path, "psi0"), "dimension does not match h0", "shape");
    if (d.multimode && d.multimode->size() != h.dim()) {
        fail(child(path, "multimode"), "dimension does not match h0", "shape");
    }
    return d;
}

Settings parse_settings(const json& j, const std::string& path) {
    allow_keys(j, path, {"format", "seed", "tolerance"});
    Settings s;
    if (const json* f = optional_field(j, "format")) {
        s.format = text(*f, child(path, "format"));
        if (*s.format != "table" && *s.format != "csv" && *s.format != "json") {
            fail(child(path, "format"), "expected table, csv or json");
        }
    }
    if (const json* seed = optional_field(j, "seed")) s.seed = unsigned_integer(*seed, child(path, "seed"));
    if (const json* t = optional_field(j, "tolerance")) {
        s.tolerance = number(*t, child(path, "tolerance"));
        if (!(*s.tolerance > 0.0)) fail(child(path, "tolerance"), "tolerance must be positive", "range");
    }
    return s;
}

// --- reference checks -------------------------------------------------------

const StateSpec& state_ref(const Scenario& s, const std::string& name, const std::string& path) {
    const auto it = s.states.find(name);
    if (it == s.states.end()) fail(path, "unknown state '" + name + "'", "resolved reference");
    return it->second;
}

Index state_dim(const StateSpec& s) {
    switch (s.kind) {
        case StateSpec::Kind::Pure: return s.vector.size();
        case StateSpec::Kind::Density: return s.matrix.rows();
        case StateSpec::Kind::Composite: return s.matrix.rows();
        case StateSpec::Kind::Amplitudes: return s.matrix.size();
        case StateSpec::Kind::Bell: return s.modes * s.modes;
    }
    return 0;
}

Dims composite_dims(const StateSpec& s) {
    switch (s.kind) {
        case StateSpec::Kind::Composite: return s.dims;
        case StateSpec::Kind::Amplitudes: return Dims{s.matrix.rows(), s.matrix.cols()};
        case StateSpec::Kind::Bell: return Dims{s.modes, s.modes};
        default: return Dims{};
    }
}

const StateSpec& single_state(const Scenario& s, const std::string& name, const std::string& path) {
    const StateSpec& st = state_ref(s, name, path);
    if (st.is_composite()) fail(path, "state '" + name + "' is composite; expected a single-space state", "shape");
    return st;
}

const StateSpec& composite_state(const Scenario& s, const std::string& name, const std::string& path) {
    const StateSpec& st = state_ref(s, name, path);
    if (!st.is_composite()) fail(path, "state '" + name + "' is not composite", "shape");
    return st;
}

Index observable_dim(const Scenario& s, const std::string& name, const std::string& path) {
    const auto it = s.observables.find(name);
    if (it == s.observables.end()) fail(path, "unknown observable '" + name + "'", "resolved reference");
    return it->second.computational > 0 ? it->second.computational : it->second.eigenbasis.rows();
}

void check_dim(Index got, Index want, const std::string& path) {
    if (got != want) {
        fail(path, "dimension " + std::to_string(got) + " does not match " + std::to_string(want), "shape");
    }
}

PairRun parse_pair(const json& j, const std::string& path, bool needs_state) {
    if (needs_state) {
        allow_keys(j, path, {"state", "a", "b"});
    } else {
        allow_keys(j, path, {"a", "b"});
    }
    PairRun r;
    if (needs_state) r.state = text(required(j, path, "state"), child(path, "state"));
    r.a = text(required(j, path, "a"), child(path, "a"));
    r.b = text(required(j, path, "b"), child(path, "b"));
    return r;
}

CompositeRun parse_composite_run(const json& j, const std::string& path, bool needs_b, bool has_base) {
    CompositeRun r;
    r.state = text(required(j, path, "state"), child(path, "state"));
    if (needs_b) {
        allow_keys(j, path, {"state", "b", "normalize"});
        r.b = complex_vector(required(j, path, "b"), child(path, "b"));
        if (const json* n = optional_field(j, "normalize")) r.normalize = boolean(*n, child(path, "normalize"));
    } else if (has_base) {
        allow_keys(j, path, {"state", "base"});
        if (const json* b = optional_field(j, "base")) {
            const std::string base = text(*b, child(path, "base"));
            if (base == "natural") {
                r.base = LogBase::Natural;
            } else if (base == "two") {
                r.base = LogBase::Two;
            } else {
                fail(child(path, "base"), "expected 'natural' or 'two'");
            }
        }
    } else {
        allow_keys(j, path, {"state"});
    }
    return r;
}

RunDirectives parse_run(const json& j, const std::string& path) {
    allow_keys(j, path,
               {"born", "lueders", "wigner", "kirkwood", "joint", "prospect", "conditional", "entanglement"});
    RunDirectives r;
    if (const json* b = optional_field(j, "born")) {
        const std::string bp = child(path, "born");
        allow_keys(*b, bp, {"state", "observable", "multimodes", "povm"});
        BornRun br;
        br.state = text(required(*b, bp, "state"), child(bp, "state"));
        br.observable = text(required(*b, bp, "observable"), child(bp, "observable"));
        if (const json* m = optional_field(*b, "multimodes")) br.multimodes = names(*m, child(bp, "multimodes"));
        if (const json* p = optional_field(*b, "povm")) br.povm = names(*p, child(bp, "povm"));
        r.born = br;
    }
    if (const json* x = optional_field(j, "lueders")) r.lueders = parse_pair(*x, child(path, "lueders"), false);
    if (const json* x = optional_field(j, "wigner")) r.wigner = parse_pair(*x, child(path, "wigner"), true);
    if (const json* x = optional_field(j, "kirkwood")) r.kirkwood = parse_pair(*x, child(path, "kirkwood"), true);
    if (const json* x = optional_field(j, "joint")) r.joint = parse_composite_run(*x, child(path, "joint"), false, false);
    if (const json* x = optional_field(j, "prospect")) {
        r.prospect = parse_composite_run(*x, child(path, "prospect"), true, false);
    }
    if (const json* x = optional_field(j, "conditional")) {
        r.conditional = parse_composite_run(*x, child(path, "conditional"), true, false);
        if (optional_field(*x, "normalize")) fail(child(path, "conditional.normalize"), "unknown field");
    }
    if (const json* x = optional_field(j, "entanglement")) {
        r.entanglement = parse_composite_run(*x, child(path, "entanglement"), false, true);
    }
    return r;
}

void check_references(const Scenario& s) {
    for (const auto& [name, m] : s.multimodes) {
        const std::string p = "multimodes." + name;
        check_dim(m.coefficients.size(), observable_dim(s, m.observable, p + ".observable"), p + ".coefficients");
        if (m.coefficients.squaredNorm() <= 0.0) fail(p + ".coefficients", "all coefficients are zero", "nonzero vector");
    }
    if (s.pipeline) {
        const PipelineSpec& pl = *s.pipeline;
        const DensityOperator sys = make_density(single_state(s, pl.system, "pipeline.system"));
        const DensityOperator mes = make_density(single_state(s, pl.measurer, "pipeline.measurer"));
        check_dim(pl.coupling.rows(), sys.dim() * mes.dim(), "pipeline.coupling");
        std::vector<PipelineStage> stages;
        for (const auto& st : pl.stages) {
            stages.push_back(st.kind == StageKind::Compose   ? PipelineStage::compose()
                             : st.kind == StageKind::Evolve  ? PipelineStage::evolve(st.duration)
                             : st.kind == StageKind::Readout ? PipelineStage::readout()
                                                             : PipelineStage::transform(st.transform));
        }
        // A dry run checks stage order, unitarity and shapes in one place.
        at_path("pipeline", [&] { return run_pipeline(sys, MeasurerSpec{mes, pl.coupling}, stages); });
    }
    if (const auto& b = s.run.born) {
        const StateSpec& st = single_state(s, b->state, "run.born.state");
        check_dim(observable_dim(s, b->observable, "run.born.observable"), state_dim(st), "run.born.observable");
        for (std::size_t i = 0; i < b->multimodes.size(); ++i) {
            const std::string p = item("run.born.multimodes", i);
            const auto it = s.multimodes.find(b->multimodes[i]);
            if (it == s.multimodes.end()) fail(p, "unknown multimode '" + b->multimodes[i] + "'", "resolved reference");
            check_dim(it->second.coefficients.size(), state_dim(st), p);
        }
        for (std::size_t i = 0; i < b->povm.size(); ++i) {
            const std::string p = item("run.born.povm", i);
            const auto it = s.multimodes.find(b->povm[i]);
            if (it == s.multimodes.end()) fail(p, "unknown multimode '" + b->povm[i] + "'", "resolved reference");
            check_dim(it->second.coefficients.size(), state_dim(st), p);
        }
    }
    if (const auto& l = s.run.lueders) {
        check_dim(observable_dim(s, l->b, "run.lueders.b"), observable_dim(s, l->a, "run.lueders.a"), "run.lueders.b");
    }
    for (const auto& [key, pr] : {std::pair{"wigner", &s.run.wigner}, std::pair{"kirkwood", &s.run.kirkwood}}) {
        if (!*pr) continue;
        const std::string p = std::string("run.") + key;
        const Index d = state_dim(single_state(s, (*pr)->state, p + ".state"));
        check_dim(observable_dim(s, (*pr)->a, p + ".a"), d, p + ".a");
        check_dim(observable_dim(s, (*pr)->b, p + ".b"), d, p + ".b");
    }
    for (const auto& [key, cr] : {std::pair{"joint", &s.run.joint}, std::pair{"prospect", &s.run.prospect},
                                  std::pair{"conditional", &s.run.conditional},
                                  std::pair{"entanglement", &s.run.entanglement}}) {
        if (!*cr) continue;
        const std::string p = std::string("run.") + key;
        const Dims dims = composite_dims(composite_state(s, (*cr)->state, p + ".state"));
        if ((*cr)->b) {
            check_dim((*cr)->b->size(), dims.b, p + ".b");
            if ((*cr)->b->squaredNorm() <= 0.0) fail(p + ".b", "all coefficients are zero", "nonzero vector");
        }
    }
}

// --- serialization ----------------------------------------------------------

ordered_json to_json(const Complex& z) {
    return ordered_json::array({z.real(), z.imag()});
}

ordered_json to_json(const ComplexVector& v) {
    ordered_json a = ordered_json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
    return a;
}

ordered_json to_json(const ComplexMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <std::size_t N>
ordered_json to_json(const std::array<double, N>& a) {
    return ordered_json(std::vector<double>(a.begin(), a.end()));
}

ordered_json composite_run_json(const CompositeRun& r, bool with_b, bool with_normalize, bool with_base) {
    ordered_json o;
    o["state"] = r.state;
    if (with_b && r.b) o["b"] = to_json(*r.b);
    if (with_normalize) o["normalize"] = r.normalize;
    if (with_base) o["base"] = r.base == LogBase::Two ? "two" : "natural";
    return o;
}

}  // namespace

bool StateSpec::is_composite() const noexcept {
    return kind == Kind::Composite || kind == Kind::Amplitudes || kind == Kind::Bell;
}

bool operator==(const StateSpec& a, const StateSpec& b) {
    return a.kind == b.kind && same(a.vector, b.vector) && same(a.matrix, b.matrix) && a.dims == b.dims &&
           a.modes == b.modes;
}

bool operator==(const ObservableSpec& a, const ObservableSpec& b) {
    return a.computational == b.computational && a.eigenvalues == b.eigenvalues && same(a.eigenbasis, b.eigenbasis);
}

bool operator==(const MultimodeSpec& a, const MultimodeSpec& b) {
    return same(a.coefficients, b.coefficients) && a.observable == b.observable;
}

bool operator==(const StageSpec& a, const StageSpec& b) {
    return a.kind == b.kind && a.duration == b.duration && same(a.transform, b.transform);
}

bool operator==(const PipelineSpec& a, const PipelineSpec& b) {
    return a.system == b.system && a.measurer == b.measurer && same(a.coupling, b.coupling) && a.stages == b.stages;
}

bool operator==(const DynamicsSpec& a, const DynamicsSpec& b) {
    if (!same(a.h0, b.h0) || !same(a.psi0, b.psi0) || a.t0 != b.t0 || a.t != b.t) return false;
    if (a.multimode.has_value() != b.multimode.has_value()) return false;
    if (a.multimode && !same(*a.multimode, *b.multimode)) return false;
    if (a.pieces.size() != b.pieces.size()) return false;
    for (std::size_t i = 0; i < a.pieces.size(); ++i) {
        if (a.pieces[i].start != b.pieces[i].start || !same(a.pieces[i].v, b.pieces[i].v)) return false;
    }
    return true;
}

bool operator==(const CompositeRun& a, const CompositeRun& b) {
    if (a.state != b.state || a.normalize != b.normalize || a.base != b.base) return false;
    if (a.b.has_value() != b.b.has_value()) return false;
    return !a.b || same(*a.b, *b.b);
}

DensityOperator make_density(const StateSpec& spec) {
    switch (spec.kind) {
        case StateSpec::Kind::Pure: return DensityOperator::from_pure(spec.vector);
        case StateSpec::Kind::Density: return DensityOperator(spec.matrix);
        default: throw ShapeError("state is composite; expected a single-space state");
    }
}

CompositeState make_composite(const StateSpec& spec) {
    switch (spec.kind) {
        case StateSpec::Kind::Composite: return CompositeState(spec.matrix, spec.dims);
        case StateSpec::Kind::Amplitudes: return CompositeState::from_amplitudes(spec.matrix);
        case StateSpec::Kind::Bell: return bell_state(spec.modes);
        default: throw ShapeError("state is not composite");
    }
}

Observable make_observable(const std::string& label, const ObservableSpec& spec) {
    if (spec.computational > 0) return Observable::computational(spec.computational, label);
    return Observable(label, spec.eigenvalues, spec.eigenbasis);
}

InterferenceDistribution make_distribution(const InterferenceSpec& spec) {
    if (spec.uniform) return InterferenceDistribution::uniform();
    return InterferenceDistribution::tabulated(spec.knots, spec.density);
}

GameSpec make_game(const GameSection& spec) {
    std::optional<Payoffs> payoffs;
    if (spec.payoffs) {
        const auto& x = *spec.payoffs;
        payoffs = Payoffs{x[0], x[1], x[2], x[3]};
    }
    return GameSpec(spec.joint, payoffs, spec.require_dilemma);
}

HamiltonianSpec make_hamiltonian(const DynamicsSpec& spec) {
    std::vector<PotentialPiece> pieces;
    pieces.reserve(spec.pieces.size());
    for (const auto& p : spec.pieces) pieces.push_back(PotentialPiece{p.start, p.v});
    return HamiltonianSpec(spec.h0, std::move(pieces));
}

ToleranceScope::ToleranceScope(std::optional<double> tol) : previous_(tolerance::operator_tolerance()) {
    if (tol) tolerance::set_operator_tolerance(*tol);
}

ToleranceScope::~ToleranceScope() {
    tolerance::set_operator_tolerance(previous_);
}

Scenario parse_scenario(std::string_view input) {
    json root;
    try {
        root = json::parse(input.begin(), input.end());
    } catch (const json::parse_error& e) {
        // Byte offset -> line and column.
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, input.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (input[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ValidationError("syntax", "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                            ": malformed JSON");
    }
    allow_keys(root, "scenario",
               {"name", "settings", "states", "observables", "multimodes", "pipeline", "game", "interference",
                "dynamics", "run"});

    Scenario s;
    if (const json* n = optional_field(root, "name")) s.name = text(*n, "name");
    if (const json* st = optional_field(root, "settings")) s.settings = parse_settings(*st, "settings");
    const ToleranceScope scope(s.settings.tolerance);

    if (const json* states = optional_field(root, "states")) {
        if (!states->is_object()) fail("states", "expected an object of named states");
        for (const auto& [name, v] : states->items()) s.states.emplace(name, parse_state(v, "states." + name));
    }
    if (const json* obs = optional_field(root, "observables")) {
        if (!obs->is_object()) fail("observables", "expected an object of named observables");
        for (const auto& [name, v] : obs->items()) {
            s.observables.emplace(name, parse_observable(name, v, "observables." + name));
        }
    }
    if (const json* mm = optional_field(root, "multimodes")) {
        if (!mm->is_object()) fail("multimodes", "expected an object of named multimode states");
        for (const auto& [name, v] : mm->items()) {
            const std::string p = "multimodes." + name;
            allow_keys(v, p, {"observable", "coefficients"});
            s.multimodes.emplace(name, MultimodeSpec{complex_vector(required(v, p, "coefficients"), p + ".coefficients"),
                                                     text(required(v, p, "observable"), p + ".observable")});
        }
    }
    if (const json* pl = optional_field(root, "pipeline")) {
        allow_keys(*pl, "pipeline", {"system", "measurer", "coupling", "stages"});
        PipelineSpec spec;
        spec.system = text(required(*pl, "pipeline", "system"), "pipeline.system");
        spec.measurer = text(required(*pl, "pipeline", "measurer"), "pipeline.measurer");
        spec.coupling = complex_matrix(required(*pl, "pipeline", "coupling"), "pipeline.coupling");
        const json& stages = required(*pl, "pipeline", "stages");
        if (!stages.is_array()) fail("pipeline.stages", "expected an array of stages");
        for (std::size_t i = 0; i < stages.size(); ++i) {
            spec.stages.push_back(parse_stage(stages[i], item("pipeline.stages", i)));
        }
        s.pipeline = std::move(spec);
    }
    if (const json* g = optional_field(root, "game")) s.game = parse_game(*g, "game");
    if (const json* i = optional_field(root, "interference")) s.interference = parse_interference(*i, "interference");
    if (const json* d = optional_field(root, "dynamics")) s.dynamics = parse_dynamics(*d, "dynamics");
    if (const json* r = optional_field(root, "run")) s.run = parse_run(*r, "run");

    check_references(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("readable file", "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    ordered_json root;
    if (!s.name.empty()) root["name"] = s.name;

    ordered_json settings = ordered_json::object();
    if (s.settings.format) settings["format"] = *s.settings.format;
    if (s.settings.seed) settings["seed"] = *s.settings.seed;
    if (s.settings.tolerance) settings["tolerance"] = *s.settings.tolerance;
    if (!settings.empty()) root["settings"] = settings;

    if (!s.states.empty()) {
        ordered_json states = ordered_json::object();
        for (const auto& [name, st] : s.states) {
            ordered_json o;
            o["kind"] = kind_name(st.kind);
            switch (st.kind) {
                case StateSpec::Kind::Pure: o["vector"] = to_json(st.vector); break;
                case StateSpec::Kind::Composite:
                    o["dims"] = {st.dims.a, st.dims.b};
                    o["matrix"] = to_json(st.matrix);
                    break;
                case StateSpec::Kind::Density:
                case StateSpec::Kind::Amplitudes: o["matrix"] = to_json(st.matrix); break;
                case StateSpec::Kind::Bell: o["modes"] = st.modes; break;
            }
            states[name] = std::move(o);
        }
        root["states"] = std::move(states);
    }
    if (!s.observables.empty()) {
        ordered_json obs = ordered_json::object();
        for (const auto& [name, o] : s.observables) {
            ordered_json j;
            if (o.computational > 0) {
                j["computational"] = o.computational;
            } else {
                j["eigenvalues"] = o.eigenvalues;
                j["eigenbasis"] = to_json(o.eigenbasis);
            }
            obs[name] = std::move(j);
        }
        root["observables"] = std::move(obs);
    }
    if (!s.multimodes.empty()) {
        ordered_json mm = ordered_json::object();
        for (const auto& [name, m] : s.multimodes) {
            mm[name] = ordered_json{{"observable", m.observable}, {"coefficients", to_json(m.coefficients)}};
        }
        root["multimodes"] = std::move(mm);
    }
    if (s.pipeline) {
        ordered_json pl;
        pl["system"] = s.pipeline->system;
        pl["measurer"] = s.pipeline->measurer;
        pl["coupling"] = to_json(s.pipeline->coupling);
        ordered_json stages = ordered_json::array();
        for (const auto& st : s.pipeline->stages) {
            ordered_json o;
            o["kind"] = to_string(st.kind);
            if (st.kind == StageKind::Evolve) o["duration"] = st.duration;
            if (st.kind == StageKind::Transform) o["matrix"] = to_json(st.transform);
            stages.push_back(std::move(o));
        }
        pl["stages"] = std::move(stages);
        root["pipeline"] = std::move(pl);
    }
    if (s.game) {
        const GameSection& g = *s.game;
        ordered_json o;
        o["joint"] = to_json(g.joint);
        if (g.payoffs) o["payoffs"] = to_json(*g.payoffs);
        o["require_dilemma"] = g.require_dilemma;
        if (g.q) o["q"] = *g.q;
        o["favored"] = g.favored == Favored::Cooperate ? "cooperate" : "defect";
        if (g.empirical) o["empirical"] = {g.empirical->first, g.empirical->second};
        if (g.cohort) {
            o["cohort"] = ordered_json{{"pairs", g.cohort->pairs},
                                       {"symmetry", g.cohort->symmetry == Symmetry::Broken ? "broken" : "intact"},
                                       {"mode", g.cohort->mode == BrokenMode::Sampled ? "sampled" : "fixed"},
                                       {"workers", g.cohort->workers}};
        }
        root["game"] = std::move(o);
    }
    if (s.interference) {
        ordered_json o;
        o["kind"] = s.interference->uniform ? "uniform" : "tabulated";
        if (!s.interference->uniform) {
            o["knots"] = s.interference->knots;
            o["density"] = s.interference->density;
        }
        root["interference"] = std::move(o);
    }
    if (s.dynamics) {
        const DynamicsSpec& d = *s.dynamics;
        ordered_json o;
        o["h0"] = to_json(d.h0);
        if (!d.pieces.empty()) {
            ordered_json pieces = ordered_json::array();
            for (const auto& p : d.pieces) pieces.push_back(ordered_json{{"start", p.start}, {"v", to_json(p.v)}});
            o["pieces"] = std::move(pieces);
        }
        o["psi0"] = to_json(d.psi0);
        o["t0"] = d.t0;
        o["t"] = d.t;
        if (d.multimode) o["multimode"] = to_json(*d.multimode);
        root["dynamics"] = std::move(o);
    }

    ordered_json run = ordered_json::object();
    if (const auto& b = s.run.born) {
        ordered_json o{{"state", b->state}, {"observable", b->observable}};
        if (!b->multimodes.empty()) o["multimodes"] = b->multimodes;
        if (!b->povm.empty()) o["povm"] = b->povm;
        run["born"] = std::move(o);
    }
    if (const auto& l = s.run.lueders) run["lueders"] = ordered_json{{"a", l->a}, {"b", l->b}};
    if (const auto& w = s.run.wigner) run["wigner"] = ordered_json{{"state", w->state}, {"a", w->a}, {"b", w->b}};
    if (const auto& k = s.run.kirkwood) run["kirkwood"] = ordered_json{{"state", k->state}, {"a", k->a}, {"b", k->b}};
    if (const auto& r = s.run.joint) run["joint"] = composite_run_json(*r, false, false, false);
    if (const auto& r = s.run.prospect) run["prospect"] = composite_run_json(*r, true, true, false);
    if (const auto& r = s.run.conditional) run["conditional"] = composite_run_json(*r, true, false, false);
    if (const auto& r = s.run.entanglement) run["entanglement"] = composite_run_json(*r, false, false, true);
    if (!run.empty()) root["run"] = std::move(run);

    return root.dump(2) + "\n";
}

}  // namespace qprospect::cli
