#include "qprospect/game.hpp"

#include "qprospect/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace qprospect {

namespace {

constexpr double kMomentTolerance = 1e-10;
constexpr std::uint64_t kBlockSize = 1u << 16;

void require_pair_distribution(std::pair<double, double> f, const char* what) {
    if (!std::isfinite(f.first) || !std::isfinite(f.second) || f.first < 0.0 || f.second < 0.0 ||
        std::abs(f.first + f.second - 1.0) > tolerance::kProbability) {
        throw ValidationError("probability pair", std::string(what) + ": pair must be nonnegative and sum to 1");
    }
}

std::pair<double, double> clamp_renormalize(double p1, double p2) {
    p1 = std::clamp(p1, 0.0, 1.0);
    p2 = std::clamp(p2, 0.0, 1.0);
    const double s = p1 + p2;
    return {p1 / s, p2 / s};
}

struct BlockSums {
    double q = 0.0;
    double q2 = 0.0;
    double p = 0.0;
    double p2 = 0.0;
};

}  // namespace

// -- GameSpec ----------------------------------------------------------------

GameSpec::GameSpec(std::array<double, 4> joint, std::optional<Payoffs> payoffs, bool require_dilemma)
    : joint_(joint), payoffs_(payoffs) {
    double sum = 0.0;
    for (double v : joint_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError("nonnegative joint table", "game: joint probabilities must be finite and >= 0");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance::kProbability) {
        throw ValidationError("unit total", "game: joint probabilities must sum to 1");
    }
    if (require_dilemma && !(payoffs_ && payoffs_->is_dilemma())) {
        throw ValidationError("dilemma ordering", "game: payoffs must satisfy x3 > x1 > x4 > x2");
    }
}

// -- InterferenceDistribution ------------------------------------------------

InterferenceDistribution InterferenceDistribution::uniform() {
    return InterferenceDistribution{};
}

InterferenceDistribution InterferenceDistribution::tabulated(std::vector<double> knots, std::vector<double> density) {
    if (knots.size() < 2 || knots.size() != density.size()) {
        throw ValidationError("tabulated density", "interference density needs >= 2 knots and one value per knot");
    }
    if (knots.front() != -1.0 || knots.back() != 1.0) {
        throw ValidationError("support [-1,1]", "interference density knots must start at -1 and end at 1");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i]) || !std::isfinite(density[i]) || density[i] < 0.0) {
            throw ValidationError("tabulated density", "interference density values must be finite and >= 0");
        }
        if (i > 0 && !(knots[i] > knots[i - 1])) {
            throw ValidationError("tabulated density", "interference density knots must be strictly increasing");
        }
    }
    InterferenceDistribution d;
    d.knots_ = std::move(knots);
    d.density_ = std::move(density);
    d.validate();
    return d;
}

double InterferenceDistribution::density(double q) const {
    if (q < -1.0 || q > 1.0) return 0.0;
    if (is_uniform()) return 0.5;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), q);
    if (it == knots_.end()) return density_.back();
    const std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
    const std::size_t lo = hi - 1;
    const double w = (q - knots_[lo]) / (knots_[hi] - knots_[lo]);
    return (1.0 - w) * density_[lo] + w * density_[hi];
}

double InterferenceDistribution::integrate(double lo, double hi, bool first_moment) const {
    using boost::math::quadrature::gauss_kronrod;
    lo = std::max(lo, -1.0);
    hi = std::min(hi, 1.0);
    if (!(hi > lo)) return 0.0;

    std::vector<double> cuts{lo};
    for (double k : knots_)
        if (k > lo && k < hi) cuts.push_back(k);
    cuts.push_back(hi);

    auto integrand = [this, first_moment](double q) { return (first_moment ? q : 1.0) * density(q); };
    double total = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        double err = 0.0;
        double l1 = 0.0;
        total += gauss_kronrod<double, 15>::integrate(integrand, cuts[i - 1], cuts[i], 15, 1e-14, &err, &l1);
        // Boost's estimate bottoms out near 1e-9 * L1 even for exact polynomial pieces.
        if (err > 1e-8 * l1) throw NumericError("interference density: quadrature did not converge");
    }
    return total;
}

void InterferenceDistribution::validate() const {
    const double mass = integrate(-1.0, 1.0, false);
    const double mean = integrate(-1.0, 1.0, true);
    if (std::abs(mass - 1.0) > kMomentTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "interference density: total mass " << mass << " is not 1";
        throw ValidationError("unit mass", os.str());
    }
    if (std::abs(mean) > kMomentTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "interference density: mean " << mean << " is not 0";
        throw ValidationError("zero mean", os.str());
    }
}

// -- game operations -----------------------------------------------------------

std::pair<double, double> classical_prospects(const GameSpec& spec) {
    const auto& j = spec.joint();
    return {j[0] + j[1], j[2] + j[3]};
}

std::pair<double, double> quarter_law(const InterferenceDistribution& dist) {
    return {dist.integrate(0.0, 1.0, true), dist.integrate(-1.0, 0.0, true)};
}

GameResult broken_symmetry_probabilities(std::pair<double, double> f, double q_magnitude, Favored favored) {
    require_pair_distribution(f, "broken_symmetry_probabilities");
    if (!std::isfinite(q_magnitude) || q_magnitude < 0.0 || q_magnitude > 1.0) {
        throw ValidationError("q in [0,1]", "broken_symmetry_probabilities: magnitude must lie in [0, 1]");
    }
    const double q1 = favored == Favored::Cooperate ? q_magnitude : -q_magnitude;
    GameResult r;
    r.f = f;
    r.q_applied = {q1, -q1};
    r.p = clamp_renormalize(f.first + q1, f.second - q1);
    return r;
}

CohortReport monte_carlo_cohort(const GameSpec& spec, const InterferenceDistribution& dist,
                                const CohortOptions& options) {
    if (options.n_pairs < 1) throw ValidationError("n_pairs >= 1", "monte_carlo_cohort: empty cohort");
    const auto f = classical_prospects(spec);
    const double q_plus = quarter_law(dist).first;
    const double sign_favored = options.favored == Favored::Cooperate ? 1.0 : -1.0;

    const std::uint64_t n = options.n_pairs;
    const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSums> sums(static_cast<std::size_t>(n_blocks));

    auto run_block = [&](std::uint64_t block) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        std::piecewise_linear_distribution<double> tab;
        if (!dist.is_uniform()) {
            tab = std::piecewise_linear_distribution<double>(dist.knots().begin(), dist.knots().end(),
                                                             dist.density_values().begin());
        }
        std::bernoulli_distribution coin(0.5);
        auto draw = [&]() { return dist.is_uniform() ? uni(rng) : tab(rng); };

        const std::uint64_t begin = block * kBlockSize;
        const std::uint64_t count = std::min(kBlockSize, n - begin);
        BlockSums s;
        for (std::uint64_t i = 0; i < count; ++i) {
            double q1 = 0.0;
            if (options.symmetry == Symmetry::Intact) {
                const double magnitude = std::abs(draw());
                q1 = coin(rng) ? magnitude : -magnitude;
            } else if (options.mode == BrokenMode::Fixed) {
                q1 = sign_favored * q_plus;
            } else {
                q1 = sign_favored * 0.5 * std::abs(draw());
            }
            const double p1 = clamp_renormalize(f.first + q1, f.second - q1).first;
            s.q += q1;
            s.q2 += q1 * q1;
            s.p += p1;
            s.p2 += p1 * p1;
        }
        sums[static_cast<std::size_t>(block)] = s;
    };

    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::uint64_t>(options.workers, 1, n_blocks));
    if (workers == 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (std::uint64_t b = next++; b < n_blocks; b = next++) run_block(b);
            });
        }
        for (auto& t : pool) t.join();
    }

    // Reduce in block order so the result does not depend on scheduling.
    BlockSums total;
    for (const auto& s : sums) {
        total.q += s.q;
        total.q2 += s.q2;
        total.p += s.p;
        total.p2 += s.p2;
    }
    const double nd = static_cast<double>(n);
    auto standard_error = [nd](double sum, double sum2) {
        if (nd < 2.0) return 0.0;
        const double mean = sum / nd;
        const double var = std::max(0.0, (sum2 - nd * mean * mean) / (nd - 1.0));
        return std::sqrt(var / nd);
    };

    CohortReport r;
    r.n = n;
    r.mean_q = total.q / nd;
    r.stderr_q = standard_error(total.q, total.q2);
    r.cooperation_fraction = total.p / nd;
    r.stderr_cooperation = standard_error(total.p, total.p2);
    return r;
}

}  // namespace qprospect
