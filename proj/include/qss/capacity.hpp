#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qss/channels.hpp"
#include "qss/qudit_engine.hpp"

namespace qss {

/// H_2(q) in bits; endpoints give 0. Throws ParamOutOfRange outside [0, 1].
double binary_entropy(double q);

struct ClosedForm {
  double value_bits = 0;
  /// True when the value is a capacity (d = 2 or 3); otherwise an achievable lower bound.
  bool certified = false;
};

/// log2 d - max_l H_2(q_l).
ClosedForm dephasing_capacity_closed_form(int d, std::span<const double> q_values);

/// I(A'>B) of (id ⊗ ch)(phi_{A'A}) with phi a purification of rho_a, in bits.
/// Uses whichever of the two routes below diagonalizes smaller matrices.
double coherent_info(const KrausChannel& ch, const DensityMatrix& rho_a);

/// H(B) - H(A'B) on the purified joint output.
double coherent_info_purified(const KrausChannel& ch, const DensityMatrix& rho_a);

/// H(B) - H(E) with E the complementary output; A'BE is pure, so H(A'B) = H(E).
double coherent_info_complementary(const KrausChannel& ch, const DensityMatrix& rho_a);

struct ObjectiveValue {
  double min_bits = 0;
  std::map<std::string, double> per_member_bits;
};

ObjectiveValue compound_objective(const CompoundFamily& family, const DensityMatrix& rho_a);

/// (1/n) compound_objective(family^{⊗n}, rho_a^{⊗n}) for n in {1, 2}.
double product_input_rate(const CompoundFamily& family, const DensityMatrix& rho_a, int n);

/// Maps d^2 unconstrained reals to a Hermitian H (diagonal first, then the real and
/// imaginary parts of the strict upper triangle, row by row) and returns H^2 / tr H^2.
DensityMatrix density_from_parameters(std::span<const double> x, int d);

struct OptimizerOptions {
  double tolerance = 1e-10;  // spread of the simplex objective values at convergence
  int max_evals = 20000;     // per start
  int restarts = 4;          // start 0 is the maximally mixed input unless mixed_start is off
  std::uint64_t seed = 42;
  bool parallel = true;
  bool mixed_start = true;    // false: every start is random
};

struct CapacityReport {
  double value_bits = 0;
  std::map<std::string, double> per_member_bits;
  DensityMatrix argmax_input;
  std::string method;
  int iterations = 0;
  int evaluations = 0;
  double tolerance = 0;
  std::uint64_t seed = 0;
  bool converged = false;
};

/// Derivative-free multi-start Nelder-Mead on max_rho min_l I(A'>B_l). Deterministic for a
/// fixed seed. If a start exhausts max_evals the report is flagged non-converged.
CapacityReport maximize_min_coherent_info(const CompoundFamily& family, const OptimizerOptions& opts = {});

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f with the adaptive Nelder-Mead parameters for dimension n.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             double step, double tolerance, int max_evals);

}  // namespace qss
