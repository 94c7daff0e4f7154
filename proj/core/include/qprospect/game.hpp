// game.hpp: the quantum prisoner-dilemma game.
//
// The first player chooses between pi_1 = C1 (x) (C2 u D2) and
// pi_2 = D1 (x) (C2 u D2). Classical parts come from a 2x2 joint table,
//   f(pi_1) = p(C1 C2) + p(C1 D2),  f(pi_2) = p(D1 C2) + p(D1 D2),
// and interference factors q are distributed over [-1, 1] with a density mu
// of unit mass and zero mean. q_+ / q_- are the positive / negative halves
// of the first moment; the uniform prior gives +-1/4.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace qprospect {

/// Payoffs x1..x4 (utility units). Carried for validation and reporting only.
struct Payoffs {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
    double x4 = 0.0;

    /// x3 > x1 > x4 > x2.
    bool is_dilemma() const noexcept { return x3 > x1 && x1 > x4 && x4 > x2; }
};

/// Joint table ordered (C1C2, C1D2, D1C2, D1D2).
class GameSpec {
public:
    explicit GameSpec(std::array<double, 4> joint, std::optional<Payoffs> payoffs = std::nullopt,
                      bool require_dilemma = false);

    const std::array<double, 4>& joint() const noexcept { return joint_; }
    const std::optional<Payoffs>& payoffs() const noexcept { return payoffs_; }

private:
    std::array<double, 4> joint_;
    std::optional<Payoffs> payoffs_;
};

/// mu(q) on [-1, 1]: the uniform prior, or a piecewise-linear density through
/// tabulated knots (q_i, mu_i) spanning [-1, 1].
class InterferenceDistribution {
public:
    static InterferenceDistribution uniform();
    static InterferenceDistribution tabulated(std::vector<double> knots, std::vector<double> density);

    bool is_uniform() const noexcept { return knots_.empty(); }
    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& density_values() const noexcept { return density_; }

    double density(double q) const;
    /// int mu dq over [lo, hi], split at knots.
    double integrate(double lo, double hi, bool first_moment) const;

private:
    InterferenceDistribution() = default;
    void validate() const;

    std::vector<double> knots_;
    std::vector<double> density_;
};

enum class Favored { Cooperate, Defect };

struct GameResult {
    std::pair<double, double> f;
    std::pair<double, double> q_applied;
    std::pair<double, double> p;
    std::optional<std::pair<double, double>> empirical_reference;
};

/// (f(pi_1), f(pi_2)).
std::pair<double, double> classical_prospects(const GameSpec& spec);

/// (q_+, q_-) by adaptive Gauss-Kronrod quadrature.
std::pair<double, double> quarter_law(const InterferenceDistribution& dist);

/// Adds +q to the favored prospect and -q to the other; components leaving
/// [0, 1] are clamped and the pair renormalised.
GameResult broken_symmetry_probabilities(std::pair<double, double> f, double q_magnitude, Favored favored);

enum class Symmetry { Intact, Broken };

/// How the favored side's interference magnitude is drawn under broken symmetry:
/// Sampled uses |q|/2 with q ~ mu (cohort mean q_+ for any zero-mean mu);
/// Fixed pins every participant to q_+.
enum class BrokenMode { Sampled, Fixed };

struct CohortOptions {
    std::uint64_t n_pairs = 1;
    Symmetry symmetry = Symmetry::Intact;
    Favored favored = Favored::Cooperate;
    BrokenMode mode = BrokenMode::Sampled;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct CohortReport {
    std::uint64_t n = 0;
    /// Interference applied to pi_1, averaged over participants.
    double mean_q = 0.0;
    double stderr_q = 0.0;
    /// Average p(pi_1) after clamping: the expected cooperation fraction.
    double cooperation_fraction = 0.0;
    double stderr_cooperation = 0.0;
};

/// Deterministic for a fixed seed, independent of the worker count: draws are
/// generated in fixed-size blocks, each seeded from (seed, block index).
CohortReport monte_carlo_cohort(const GameSpec& spec, const InterferenceDistribution& dist,
                                const CohortOptions& options);

}  // namespace qprospect
