#include "qprospect/amplitudes.hpp"

#include "qprospect/numeric.hpp"

#include <cmath>
#include <sstream>

namespace qprospect {

AmplitudeMatrix::AmplitudeMatrix(ComplexMatrix c, double t0, double t) : c_(std::move(c)), t0_(t0), t_(t) {
    if (c_.rows() <= 0 || c_.cols() <= 0) throw ShapeError("amplitude matrix: empty");
    require_finite(c_, "amplitude matrix");
    const double n2 = c_.squaredNorm();
    if (std::abs(n2 - 1.0) > tolerance::kWaveNorm) {
        std::ostringstream os;
        os.precision(17);
        os << "amplitude matrix: sum |c|^2 = " << n2 << " is not 1";
        throw ValidationError("unit norm", os.str());
    }
}

RealVector AmplitudeMatrix::column_norms() const {
    return c_.cwiseAbs2().colwise().sum().transpose();
}

RealVector AmplitudeMatrix::row_norms() const {
    return c_.cwiseAbs2().rowwise().sum();
}

}  // namespace qprospect
