#pragma once

// Random instances for property checks. All generators draw only from the
// supplied engine, so a seed fixes every sample.

#include "dhym/hermitian.hpp"

#include <random>

namespace dhym {

using Rng = std::mt19937_64;

/// Spectrum with Theta = sum of angles, angles uniform in (-pi/2, pi/2).
Spectrum random_spectrum(Rng& rng, int n);

/// Spectrum with Theta(lambda) = n pi/2 - deficit: the angle deficits
/// pi/2 - arctan(lambda_i) are a uniform random split of `deficit`.
/// deficit < pi gives a supercritical spectrum.
Spectrum spectrum_with_deficit(Rng& rng, int n, double deficit);

/// Boundary spectrum of the level set Theta = sigma, sigma in
/// [(n-2)pi/2, n pi/2): the first n-1 values come from a random deficit
/// split and the last is recomputed with boundary_solve.
Spectrum boundary_sample(Rng& rng, int n, double sigma);

/// Haar-ish random unitary (QR of a complex Gaussian matrix).
ComplexMatrix random_unitary(Rng& rng, int n);

/// U diag(lambda) U^*.
HermitianForm conjugated(const Spectrum& lambda, const ComplexMatrix& u);

/// Gaussian Hermitian matrix with entries of standard deviation `scale`.
HermitianForm random_hermitian(Rng& rng, int n, double scale = 1.0);

/// G G^* + shift I.
HermitianForm random_positive_definite(Rng& rng, int n, double shift = 0.5);

}  // namespace dhym
