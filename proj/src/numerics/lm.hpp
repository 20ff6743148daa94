#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace floqept::numerics {

using Model = std::function<double(double x, std::span<const double> p)>;
// Writes d model / d p at x into grad.
using ModelGradient = std::function<void(double x, std::span<const double> p, std::span<double> grad)>;

struct LmOptions {
  int max_iterations = 500;
  double gradient_tol = 1e-8;   // converged when |J^T r| < gradient_tol * (1 + |r|)
  double step_tol = 1e-15;      // relative parameter step that ends the search
  double lambda0 = 1e-3;
  double lambda_down = 0.3;
  double lambda_up = 10.0;
  double lambda_max = 1e16;
  double fd_rel_step = 1e-6;    // central-difference step relative to max(|p|, 1e-3)
};

struct FitResult {
  std::vector<double> parameters;
  double residual_norm = 0;
  double gradient_norm = 0;
  double jacobian_condition_proxy = 0;
  int iterations = 0;
  bool converged = false;
  std::string message;
  std::vector<double> residuals;         // y_model - y_data at the final parameters
  std::vector<double> residual_history;  // residual norm after each accepted step, starting at p0
};

// Row-major N x P Jacobian by central differences.
std::vector<double> central_difference_jacobian(const Model& model, std::span<const double> xs,
                                                std::span<const double> p, double rel_step = 1e-6);

// Levenberg-Marquardt with Marquardt diagonal scaling. lambda shrinks by
// lambda_down after an accepted step and grows by lambda_up after a rejected
// one; the schedule is fixed so fits are deterministic.
FitResult lm_fit(const Model& model, std::span<const double> xs, std::span<const double> ys,
                 std::vector<double> p0, const LmOptions& opts = {},
                 const ModelGradient& gradient = {});

}  // namespace floqept::numerics
