// random.hpp: random states and bases for property checks and benchmarks.

#pragma once

#include "qprospect/composite.hpp"
#include "qprospect/events.hpp"

#include <random>
#include <string>

namespace qprospect::random {

using Engine = std::mt19937_64;

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix unitary(Index dim, Engine& rng);

/// Normalised complex Gaussian vector.
ComplexVector unit_vector(Index dim, Engine& rng);

/// Complex Gaussian vector, not normalised.
ComplexVector gaussian_vector(Index dim, Engine& rng);

/// G G^+ / Tr for a dim x rank Ginibre matrix G; full rank when rank <= 0.
DensityOperator density(Index dim, Engine& rng, Index rank = 0);

/// Observable with a Haar-random eigenbasis and eigenvalues 0, 1, ..., dim-1.
Observable observable(Index dim, Engine& rng, std::string label = "random");

/// Random pure composite state, generically entangled.
CompositeState pure_composite(Dims dims, Engine& rng);

/// Random mixed composite state of the given rank (full rank when rank <= 0).
CompositeState mixed_composite(Dims dims, Engine& rng, Index rank = 0);

}  // namespace qprospect::random
