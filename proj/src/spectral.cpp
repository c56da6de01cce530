#include "raes/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace raes {

namespace {

void project_out(std::span<double> x, std::span<const double> unit) {
  const double dot = std::inner_product(x.begin(), x.end(), unit.begin(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dot * unit[i];
}

double norm(std::span<const double> x) {
  return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

// Random unit vector orthogonal to `unit`.
void random_start(std::span<double> x, std::span<const double> unit, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  for (;;) {
    for (auto& xi : x) xi = gauss(rng);
    project_out(x, unit);
    const double len = norm(x);
    if (len > 1e-8) {
      for (auto& xi : x) xi /= len;
      return;
    }
  }
}

}  // namespace

EigenEstimate deflated_top_eigenvalue(std::uint32_t n, const LinearOperator& apply,
                                      std::span<const double> deflate,
                                      const PowerIterationOptions& options) {
  if (n < 2) throw InvalidParameter("power iteration needs dimension >= 2");
  std::mt19937_64 rng(options.seed);
  std::vector<double> x(n), y(n);
  random_start(x, deflate, rng);

  EigenEstimate best{0.0, 0, std::numeric_limits<double>::infinity()};
  double run_best = std::numeric_limits<double>::infinity();
  std::uint64_t last_improvement = 0;

  for (std::uint64_t it = 1; it <= options.max_iters; ++it) {
    apply(x, y);
    project_out(y, deflate);
    const double mu = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    double r2 = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double d = y[i] - mu * x[i];
      r2 += d * d;
    }
    const double residual = std::sqrt(r2);
    if (residual < best.residual) best = {mu, it, residual};
    if (residual <= options.tol) return {mu, it, residual};

    if (residual < run_best * (1.0 - 1e-6)) {
      run_best = residual;
      last_improvement = it;
    } else if (it - last_improvement > options.stagnation_window) {
      random_start(x, deflate, rng);
      run_best = std::numeric_limits<double>::infinity();
      last_improvement = it;
      continue;
    }

    const double len = norm(y);
    if (len < 1e-300) {
      // x lies in the null space: every remaining eigenvalue is 0.
      return {0.0, it, 0.0};
    }
    for (std::uint32_t i = 0; i < n; ++i) x[i] = y[i] / len;
  }
  best.iterations = options.max_iters;
  throw ConvergenceError("power iteration did not converge within " +
                             std::to_string(options.max_iters) + " iterations (residual " +
                             std::to_string(best.residual) + ")",
                         SpectralResult{best.value, std::max(best.value, 0.0), best.iterations,
                                        best.residual});
}

SpectralResult second_eigenvalue(const Graph& g, double tol, std::uint64_t max_iters) {
  const std::uint32_t n = g.n();
  const double shift = g.delta();
  std::vector<double> ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
  LinearOperator apply = [&](std::span<const double> x, std::span<double> y) {
    for (NodeId v = 0; v < n; ++v) {
      double acc = shift * x[v];
      for (NodeId w : g.neighbors(v)) acc += x[w];
      y[v] = acc;
    }
  };
  PowerIterationOptions options;
  options.tol = tol;
  options.max_iters = max_iters;
  try {
    const auto est = deflated_top_eigenvalue(n, apply, ones, options);
    const double lambda2 = est.value - shift;
    return {lambda2, std::max(lambda2, 0.0), est.iterations, est.residual};
  } catch (const ConvergenceError& e) {
    SpectralResult best = e.best();
    best.lambda2 -= shift;
    best.lambda2_plus = std::max(best.lambda2, 0.0);
    throw ConvergenceError(e.what(), best);
  }
}

}  // namespace raes
