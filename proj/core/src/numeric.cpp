#include "qprospect/numeric.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace qprospect {

namespace {
std::atomic<double> g_operator_tolerance{tolerance::kDefaultOperator};
}

namespace tolerance {

double operator_tolerance() noexcept {
    return g_operator_tolerance.load(std::memory_order_relaxed);
}

void set_operator_tolerance(double tol) {
    if (!std::isfinite(tol) || tol <= 0.0) {
        throw ValidationError("tolerance", "operator tolerance must be finite and positive");
    }
    g_operator_tolerance.store(tol, std::memory_order_relaxed);
}

}  // namespace tolerance

double checked_probability(double raw, const char* what) {
    if (!std::isfinite(raw) || raw < -tolerance::kProbability ||
        raw > 1.0 + tolerance::kProbability) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": probability " << raw << " outside [0,1]";
        throw NumericError(os.str());
    }
    if (raw < 0.0) return 0.0;
    if (raw > 1.0) return 1.0;
    return raw;
}

}  // namespace qprospect
