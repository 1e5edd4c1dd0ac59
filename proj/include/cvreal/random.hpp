#pragma once

#include <random>

#include "cvreal/types.hpp"

namespace cvreal {

// All generators draw from a caller-owned engine so sweeps are reproducible
// from a seed.
using Rng = std::mt19937_64;

CVector haar_state(Index dim, Rng& rng);

// Haar-distributed unitary from the QR decomposition of a complex Ginibre
// matrix with the phases of R's diagonal divided out.
CMatrix haar_unitary(Index dim, Rng& rng);

// Mixture of between 1 and dim Haar-random pure states with flat Dirichlet
// weights.
CMatrix random_density_matrix(Index dim, Rng& rng);

// Unitary DFT matrix exp(2 pi i j k / dim) / sqrt(dim), any dim >= 1.
CMatrix dft_unitary(Index dim);

}  // namespace cvreal
