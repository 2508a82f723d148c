#pragma once

// The C-subsolution condition in three pointwise forms:
//   eigenvalue form     sum_{l != j} arctan(mu_l) > h - pi/2 for every j,
//   form positivity     sign of the (n-1,n-1) coefficient built from
//                       prod_{i != j}(1 + i mu_i),
//   argument pairing    Arg prod_{j in J}(1 + i mu_j) > theta_hat - (n-p) pi/2
//                       for every index subset J of size p.

#include "dhym/grid.hpp"
#include "dhym/hermitian.hpp"
#include "dhym/phase.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dhym {

struct SubsolutionVerdict {
    bool is_subsolution = false;
    int worst_index = 0;  // j attaining the minimum deleted sum
    double slack = 0.0;   // min_j [sum_{l != j} arctan(mu_l) - (h - pi/2)]
    Region region = Region::outside;
};

/// Requires h in ((n-2)pi/2, n pi/2).
SubsolutionVerdict c_subsolution_test(const Spectrum& mu, double h);

struct FormPositivityResult {
    bool positive = false;
    /// Per-index coefficient, normalized by |prod_{i != j}(1 + i mu_i)|.
    std::vector<double> margins;
    /// True when theta_hat sat on a cot/tan pole and the argument form was used.
    bool used_argument_form = false;
    /// Theta(mu) > (n-2)pi/2. The form-positivity and eigenvalue forms agree
    /// pointwise on supercritical mu.
    bool mu_supercritical = false;
};

/// Requires theta_hat in ((n-2)pi/2, n pi/2).
FormPositivityResult form_positivity_test(const Spectrum& mu, double theta_hat);

struct ArgumentPairingResult {
    bool passes = false;
    std::vector<int> worst_subset;  // zero-based indices into mu (descending order)
    double margin = 0.0;
};

/// Exhaustive over subsets of size p, 1 <= p <= n-1, n <= 12. The argument of
/// a product of right-half-plane factors is the sum of factor arctangents.
ArgumentPairingResult argument_pairing_test(const Spectrum& mu, double theta_hat, int p);

struct FieldSubsolutionVerdict {
    bool is_subsolution = false;
    double slack = 0.0;
    std::size_t worst_point = 0;
    int worst_index = 0;
    /// Filled when a grid was supplied.
    std::optional<std::array<double, TorusGrid::kMaxDim>> worst_coordinates;
};

/// Pointwise eigenvalue-form test over a field; minimum slack with ties
/// broken by lowest linear index.
FieldSubsolutionVerdict subsolution_field_test(std::span<const Spectrum> mu_field,
                                               std::span<const double> h_field,
                                               const TorusGrid* grid = nullptr);

}  // namespace dhym
