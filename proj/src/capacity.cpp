#include "qss/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "qss/random.hpp"

namespace qss {

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::ParamOutOfRange, "H_2 argument not in [0,1]");
  if (q == 0.0 || q == 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

ClosedForm dephasing_capacity_closed_form(int d, std::span<const double> q_values) {
  if (d < 2) throw Error(ErrorCode::ParamOutOfRange, "dimension must be >= 2");
  if (q_values.empty()) throw Error(ErrorCode::ParamOutOfRange, "no dephasing parameters");
  double worst = 0;
  for (double q : q_values) worst = std::max(worst, binary_entropy(q));
  return {std::log2(static_cast<double>(d)) - worst, d == 2 || d == 3};
}

namespace {

void check_input_dim(const KrausChannel& ch, const DensityMatrix& rho_a) {
  if (rho_a.dim() != ch.in_dim()) {
    throw Error(ErrorCode::DimMismatch, "input state dimension " + std::to_string(rho_a.dim()) +
                                            " differs from channel input " + std::to_string(ch.in_dim()));
  }
}

double entropy_bits(const CMatrix& m) {
  return shannon_bits(detail::clipped_eigenvalues<double>(m));
}

}  // namespace

double coherent_info_purified(const KrausChannel& ch, const DensityMatrix& rho_a) {
  check_input_dim(ch, rho_a);
  const DensityMatrix joint = purify(rho_a).density();
  std::vector<int> system(rho_a.shape().size());
  std::iota(system.begin(), system.end(), 1);
  const DensityMatrix out = apply_channel(joint, ch, system);
  const std::vector<int> reference{0};
  return coherent_information(out, reference);
}

double coherent_info_complementary(const KrausChannel& ch, const DensityMatrix& rho_a) {
  check_input_dim(ch, rho_a);
  const DensityMatrix out = apply_channel(rho_a, ch);
  return entropy_bits(out.matrix()) - entropy_bits(environment_state(ch, rho_a.matrix()));
}

double coherent_info(const KrausChannel& ch, const DensityMatrix& rho_a) {
  const Eigen::Index joint = ch.in_dim() * ch.out_dim();
  const auto env = static_cast<Eigen::Index>(ch.ops().size());
  if (std::max(ch.out_dim(), env) < joint) return coherent_info_complementary(ch, rho_a);
  return coherent_info_purified(ch, rho_a);
}

ObjectiveValue compound_objective(const CompoundFamily& family, const DensityMatrix& rho_a) {
  ObjectiveValue v;
  v.min_bits = std::numeric_limits<double>::infinity();
  for (const FamilyMember& m : family.members()) {
    const double bits = coherent_info(m.channel, rho_a);
    v.per_member_bits[m.label] = bits;
    v.min_bits = std::min(v.min_bits, bits);
  }
  return v;
}

double product_input_rate(const CompoundFamily& family, const DensityMatrix& rho_a, int n) {
  if (n != 1 && n != 2) throw Error(ErrorCode::InvalidArgument, "tensor-power level must be 1 or 2");
  if (n == 1) return compound_objective(family, rho_a).min_bits;
  std::vector<FamilyMember> powered;
  for (const FamilyMember& m : family.members()) powered.push_back({m.label, tensor_power(m.channel, n)});
  return compound_objective(CompoundFamily(std::move(powered)), tensor(rho_a, rho_a)).min_bits / n;
}

DensityMatrix density_from_parameters(std::span<const double> x, int d) {
  if (static_cast<int>(x.size()) != d * d) throw Error(ErrorCode::DimMismatch, "need d^2 parameters");
  CMatrix h = CMatrix::Zero(d, d);
  std::size_t k = 0;
  for (int i = 0; i < d; ++i) h(i, i) = x[k++];
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      h(i, j) = {x[k], x[k + 1]};
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  }
  CMatrix rho = h * h;
  const double tr = rho.trace().real();
  if (!(tr > 0)) throw Error(ErrorCode::InvalidState, "parameters map to the zero matrix");
  rho /= tr;
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return DensityMatrix::trusted(RegisterShape({d}, {"A"}), std::move(rho));
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             double step, double tolerance, int max_evals) {
  const std::size_t n = x0.size();
  const double dim = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dim;
  const double gamma = 0.75 - 1.0 / (2.0 * dim);
  const double delta = 1.0 - 1.0 / dim;

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return f(x);
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> idx(n + 1);
  while (true) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = idx.front();
    const std::size_t worst = idx.back();
    const std::size_t second = idx[n - 1];

    if (values[worst] - values[best] <= tolerance) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= max_evals) break;
    ++res.iterations;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / dim;
    }
    auto along = [&](double coeff) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + coeff * (centroid[k] - simplex[worst][k]);
      return p;
    };

    std::vector<double> reflected = along(alpha);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      std::vector<double> expanded = along(alpha * beta);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    std::vector<double> contracted = along(outside ? alpha * gamma : -gamma);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[best][k] + delta * (simplex[i][k] - simplex[best][k]);
      values[i] = eval(simplex[i]);
    }
  }
  const std::size_t best =
      static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  res.x = simplex[best];
  res.value = values[best];
  return res;
}

namespace {

struct StartOutcome {
  std::vector<double> x;
  double value = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

StartOutcome run_start(const CompoundFamily& family, int d, std::vector<double> x0, const OptimizerOptions& opts) {
  auto objective = [&](std::span<const double> x) {
    return -compound_objective(family, density_from_parameters(x, d)).min_bits;
  };
  StartOutcome out;
  double step = 0.2;
  // Restart from the incumbent with a smaller simplex until a run stops improving.
  for (int round = 0; round < 4; ++round) {
    const int budget = opts.max_evals - out.evaluations;
    if (budget <= 0) break;
    NelderMeadResult r = nelder_mead(objective, x0, step, opts.tolerance, budget);
    out.iterations += r.iterations;
    out.evaluations += r.evaluations;
    out.converged = r.converged;
    const double improvement = -r.value - out.value;
    if (-r.value > out.value) {
      out.value = -r.value;
      out.x = r.x;
    }
    if (!r.converged || improvement <= opts.tolerance) break;
    x0 = out.x;
    step *= 0.25;
  }
  return out;
}

}  // namespace

CapacityReport maximize_min_coherent_info(const CompoundFamily& family, const OptimizerOptions& opts) {
  const auto d = static_cast<int>(family.input_dim());
  const std::size_t n_params = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  const int restarts = std::max(1, opts.restarts);

  std::vector<std::vector<double>> starts;
  std::vector<double> mixed(n_params, 0.0);
  std::fill(mixed.begin(), mixed.begin() + d, 1.0);
  if (opts.mixed_start) starts.push_back(mixed);
  Rng rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  while (static_cast<int>(starts.size()) < restarts) {
    std::vector<double> x(n_params);
    for (double& v : x) v = normal(rng);
    starts.push_back(std::move(x));
  }

  std::vector<StartOutcome> outcomes(starts.size());
  if (opts.parallel && starts.size() > 1) {
    std::vector<std::future<StartOutcome>> futures;
    for (const auto& x0 : starts) {
      futures.push_back(std::async(std::launch::async, run_start, std::cref(family), d, x0, std::cref(opts)));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) outcomes[i] = run_start(family, d, starts[i], opts);
  }

  std::size_t best = 0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = true;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    iterations += outcomes[i].iterations;
    evaluations += outcomes[i].evaluations;
    converged = converged && outcomes[i].converged;
    if (outcomes[i].value > outcomes[best].value) best = i;
  }
  DensityMatrix argmax = density_from_parameters(outcomes[best].x, d);
  ObjectiveValue at_best = compound_objective(family, argmax);
  CapacityReport report{at_best.min_bits, std::move(at_best.per_member_bits), std::move(argmax), "optimize",
                        iterations, evaluations, opts.tolerance, opts.seed, converged};
  return report;
}

}  // namespace qss
