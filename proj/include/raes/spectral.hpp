#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "raes/error.hpp"
#include "raes/graph.hpp"

namespace raes {

struct SpectralResult {
  double lambda2 = 0.0;       // second-largest signed adjacency eigenvalue
  double lambda2_plus = 0.0;  // max(lambda2, 0)
  std::uint64_t iterations = 0;
  double residual = 0.0;
};

/// Thrown when power iteration runs out of iterations; carries the best
/// estimate seen so far.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, SpectralResult best)
      : Error(ErrorKind::ConvergenceFailure, what), best_(best) {}
  const SpectralResult& best() const noexcept { return best_; }

 private:
  SpectralResult best_;
};

struct PowerIterationOptions {
  double tol = 1e-10;
  std::uint64_t max_iters = 100000;
  std::uint64_t stagnation_window = 500;  // restart if no improvement this long
  std::uint64_t seed = 0x5eed;
};

struct EigenEstimate {
  double value = 0.0;
  std::uint64_t iterations = 0;
  double residual = 0.0;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Largest eigenvalue of a symmetric positive semidefinite operator on the
/// orthogonal complement of the unit vector `deflate`. Convergence means the
/// Rayleigh residual ||Bx - mu x|| is <= tol. Throws ConvergenceError.
EigenEstimate deflated_top_eigenvalue(std::uint32_t n, const LinearOperator& apply,
                                      std::span<const double> deflate,
                                      const PowerIterationOptions& options);

/// Second-largest signed adjacency eigenvalue of a regular graph. Runs power
/// iteration on A + Delta*I with the all-ones direction projected out; the
/// dominant remaining eigenvalue is lambda2 + Delta.
SpectralResult second_eigenvalue(const Graph& g, double tol = 1e-10,
                                 std::uint64_t max_iters = 100000);

}  // namespace raes
