#include "qprospect/random.hpp"

#include <Eigen/QR>

#include <cmath>

namespace qprospect::random {

namespace {

ComplexMatrix ginibre(Index rows, Index cols, Engine& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
    return m;
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

}  // namespace

ComplexMatrix unitary(Index dim, Engine& rng) {
    const Eigen::MatrixXcd z = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < dim; ++k) {
        const Complex d = r(k, k);
        const double a = std::abs(d);
        if (a > 0.0) q.col(k) *= d / a;
    }
    return q;
}

ComplexVector gaussian_vector(Index dim, Engine& rng) {
    return ginibre(dim, 1, rng).col(0);
}

ComplexVector unit_vector(Index dim, Engine& rng) {
    ComplexVector v = gaussian_vector(dim, rng);
    return v / v.norm();
}

DensityOperator density(Index dim, Engine& rng, Index rank) {
    const ComplexMatrix g = ginibre(dim, rank > 0 ? rank : dim, rng);
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityOperator(hermitize(m));
}

Observable observable(Index dim, Engine& rng, std::string label) {
    std::vector<double> ev(static_cast<std::size_t>(dim));
    for (Index k = 0; k < dim; ++k) ev[static_cast<std::size_t>(k)] = static_cast<double>(k);
    return Observable(std::move(label), std::move(ev), unitary(dim, rng));
}

CompositeState pure_composite(Dims dims, Engine& rng) {
    ComplexMatrix c = ginibre(dims.a, dims.b, rng);
    c /= c.norm();
    return CompositeState::from_amplitudes(c);
}

CompositeState mixed_composite(Dims dims, Engine& rng, Index rank) {
    const DensityOperator rho = density(dims.total(), rng, rank);
    return CompositeState(rho.matrix(), dims);
}

}  // namespace qprospect::random
