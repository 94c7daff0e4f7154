// amplitudes.hpp: two-time amplitude matrix c(n, alpha) of a pure composite state.

#pragma once

#include "qprospect/qcore.hpp"

namespace qprospect {

/// c(n, alpha): amplitude of observing mode alpha at t0 and mode n at t.
/// Invariant: sum |c|^2 = 1 within tolerance::kWaveNorm.
class AmplitudeMatrix {
public:
    explicit AmplitudeMatrix(ComplexMatrix c, double t0 = 0.0, double t = 0.0);

    const ComplexMatrix& c() const noexcept { return c_; }
    double t0() const noexcept { return t0_; }
    double t() const noexcept { return t_; }
    Index rows() const noexcept { return c_.rows(); }
    Index cols() const noexcept { return c_.cols(); }

    /// sum_n |c(n, alpha)|^2 for each alpha.
    RealVector column_norms() const;
    /// sum_alpha |c(n, alpha)|^2 for each n.
    RealVector row_norms() const;

private:
    ComplexMatrix c_;
    double t0_;
    double t_;
};

}  // namespace qprospect
