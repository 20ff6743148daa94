#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/model.hpp"
#include "engine/floquet.hpp"
#include "numerics/lm.hpp"
#include "observables/observables.hpp"

namespace floqept::analysis {

enum class EpRoute { closed_form, monodromy, spectral };
std::string_view to_string(EpRoute r);
EpRoute parse_route(std::string_view s);

struct EpOptions {
  double bracket_width = 0.5;            // Hz
  double monodromy_gap = 1.0;            // Hz, broken when the folded gap exceeds it
  std::optional<double> gamma_eff;       // closed-form route only: replaces the Bessel formula
  observables::SeparationOptions separation{};
};

struct EpResult {
  double delta0_abs = 0;  // threshold |delta0|*
  double mu = 0;          // |delta0|* - n w
  double gamma_eff = 0;   // mu / 2
  EpRoute route = EpRoute::closed_form;
  double lo = 0;          // final bracket on |delta0|
  double hi = 0;
  int iterations = 0;
};

// Bisection on |delta0| over [n w, n w + 10 gc] against the route's
// broken-phase indicator. n replaces n1 - n2 of the template (n1 = n2 + n).
EpResult locate_ep(const ModelParams& tmpl, int n, EpRoute route, const SimConfig& cfg,
                   const EpOptions& opts = {});

// The route's indicator at one |delta0|: true when broken.
bool ep_indicator(const ModelParams& tmpl, int n, EpRoute route, double delta0_abs, const SimConfig& cfg,
                  const EpOptions& opts = {});

struct GammaPoint {
  double omega_b = 0;
  double gamma_eff = 0;
  bool resolved = true;
  std::string note;
};

struct GammaCurve {
  std::vector<GammaPoint> points;
  bool fitted = false;
  double gamma_c = 0;
  double delta_b = 0;
  double residual_norm = 0;
  numerics::FitResult fit;
  std::string message;
};

// Model gc * |J0(db / w) J1(db / w)|.
double coupling_model(double omega_b, double gamma_c, double delta_b);

// Fits (gc, db) to (w, gamma_eff) pairs.
GammaCurve fit_gamma_curve(std::vector<GammaPoint> points);

// EP location per w (n = 1 unless the template says otherwise) followed by the fit.
GammaCurve gamma_curve(const ModelParams& tmpl, const std::vector<double>& omega_grid, const SimConfig& cfg,
                       EpRoute route = EpRoute::spectral, const EpOptions& opts = {}, int jobs = 1);

struct HeightPoint {
  double omega_b = 0;
  double height = 0;
};

// Fits alpha * J_m(k / w)^2; parameters = {alpha, k}.
numerics::FitResult fit_sideband_heights(const std::vector<HeightPoint>& heights, int m);

double coefficient_of_determination(const std::vector<double>& y, const std::vector<double>& residuals);

// Peak heights of the CH1 self spectrum at the m-th sideband (delta0 + m w)
// for each w, with the template's weak coupling left in place.
std::vector<std::vector<HeightPoint>> simulate_sideband_heights(const ModelParams& tmpl,
                                                                const std::vector<double>& omega_grid,
                                                                const std::vector<int>& orders,
                                                                const SimConfig& cfg, int jobs = 1);

// Drive depth db with gc |J_n1(db/w) J_n2(db/w)| = target, solved for x = db/w
// inside [x_lo, x_hi] (which must bracket a root).
double solve_drive_depth(double gamma_c, double omega_b, int n1, int n2, double target, double x_lo,
                         double x_hi);

// All roots in x of gc |J_n1(x) J_n2(x)| = target on (0, x_max], ascending.
std::vector<double> drive_depth_roots(double gamma_c, int n1, int n2, double target, double x_max = 10.0);

using engine::PhaseTag;

struct PhaseCell {
  double delta0_abs = 0;
  double omega_b = 0;
  double mu = 0;
  double gamma_eff = 0;
  PhaseTag tag = PhaseTag::broken;
};

// Classification by |mu| against 2 gamma_eff (Bessel formula with n1 = n2 + n);
// cells with ||mu| - 2 gamma_eff| < resolution are EP-band.
std::vector<PhaseCell> phase_diagram(const ModelParams& tmpl, const std::vector<double>& delta0_abs,
                                     const std::vector<double>& omega_grid, int n, double resolution = 1.0);

}  // namespace floqept::analysis
