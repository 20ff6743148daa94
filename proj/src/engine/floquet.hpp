#pragma once

#include <array>
#include <vector>
#include <string_view>

#include "core/model.hpp"
#include "numerics/complex_matrix.hpp"
#include "numerics/eigen.hpp"

namespace floqept::engine {

using numerics::cplx;
using numerics::ComplexMat;
using numerics::ComplexVec;
using numerics::EigenPair;

enum class PhaseTag { unbroken, ep, broken };
std::string_view to_string(PhaseTag t);

// Two branches, plus first in the global ordering, with eigenvectors.
struct Branches {
  EigenPair pair;
  PhaseTag tag = PhaseTag::broken;

  cplx plus() const { return pair.values[0]; }
  cplx minus() const { return pair.values[1]; }
};

// Relative tolerance for calling a point an EP: |mismatch - 2 coupling| below
// ep_rel_tol * max(|mismatch|, 2 coupling, 1).
inline constexpr double ep_rel_tol = 1e-9;
PhaseTag classify(double mismatch_abs, double coupling);

// [[delta0, i gc], [i gc, 0]]
ComplexMat static_hamiltonian(double delta0, double gamma_c);

// Closed-form branches delta0/2 +- sqrt(delta0^2/4 - gc^2).
Branches static_eigenvalues(double delta0, double gamma_c);

// |J_n1(x) J_n2(x)| gc with x = delta_b / omega_b.
double effective_coupling(double gamma_c, double delta_b, double omega_b, int n1, int n2);
double effective_coupling(const ModelParams& p);

// Closed-form Floquet branches (delta0 + n~ w)/2 +- sqrt((delta0 - n~ w)^2/4 - ge^2)
// with n~ = sign(delta0) n; tagged by mu = |delta0| - n w against 2 ge.
Branches floquet_eigenvalues(double delta0, double omega_b, int n, double gamma_eff);

// Rotating-wave effective model.
struct RwaModel {
  double delta0 = 0;
  double n_omega = 0;    // n~ * omega_b
  double gamma_eff = 0;
  double gamma12 = 0;

  double phase_rate() const { return delta0 - n_omega; }
  // Frame-stationary matrix whose eigenvalues are the closed-form branches;
  // with_decay subtracts i gamma12 on the diagonal.
  ComplexMat matrix(bool with_decay = false) const;
  // Time-dependent form with off-diagonal phases exp(-+ 2 pi i phase_rate t).
  ComplexMat at(double t) const;
};

RwaModel build_rwa(const ModelParams& p);

// Eigenvalues of the RWA matrix computed numerically (decay excluded).
Branches rwa_eigenvalues(const ModelParams& p);

// Time-periodic lab-frame model. Diagonal: delta0 + delta_b cos(2 pi w t) - i g12
// and delta_b cos(2 pi w t) - i g12. The dissipative coupling carries the
// motional phase of the common field, dressed by J0 on departure:
// H12 = i gc J0(x) exp(-i x sin(2 pi w t)), H21 = i gc J0(x) exp(+i x sin(2 pi w t)).
// delta_b = 0 reduces to the static model minus i g12.
class LabFrameModel {
 public:
  explicit LabFrameModel(const ModelParams& p);

  double period() const { return 1.0 / omega_b_; }
  double omega_b() const { return omega_b_; }
  void hamiltonian(double t, ComplexMat& h) const;
  ComplexMat hamiltonian(double t) const;
  // Fourier component k of H12 and H21 for H(t) = sum_k H_k exp(-2 pi i k w t).
  cplx h12_harmonic(int k) const;
  cplx h21_harmonic(int k) const;
  const ModelParams& params() const { return p_; }

 private:
  ModelParams p_;
  double omega_b_;
  double x_;
  double dress_;  // gc * J0(x)
  std::vector<double> bessel_;  // J_0 .. J_kmax at x
};

struct QuasiEnergySet {
  std::array<cplx, 2> values{};          // folded, real part in [-w/2, w/2), ordered
  std::array<int, 2> zone_offsets{};     // unfolded = folded + offset * w
  std::array<ComplexVec, 2> floquet_modes{};  // monodromy eigenvectors
  ComplexMat monodromy;
  double omega_b = 0;
  double determinant_abs = 0;
  double determinant_expected = 0;
  std::size_t steps = 0;

  std::array<cplx, 2> unfolded() const;
  // Distance between the folded real parts on the circle of circumference w.
  double real_gap() const;
  double determinant_rel_error() const;
};

// Quasi-energy nu = i log(lambda) / (2 pi T) folded to [-w/2, w/2).
double fold(double re, double omega_b);

QuasiEnergySet monodromy_quasienergies(const ModelParams& p, const SimConfig& cfg);

struct Probe {
  Channel channel = Channel::ch1;
  double detuning = 0;
  cplx amplitude = 1.0;
};

struct SidebandResponse {
  int truncation = 0;
  double detuning = 0;
  double omega_b = 0;
  ComplexVec amplitudes;  // index j * (2M + 1) + (m + M)
  double residual = 0;    // relative residual of the linear solve

  cplx at(Channel c, int m) const;
  double power(Channel c) const;
  double sideband_power(Channel c, int m) const { return std::norm(at(c, m)); }
  // s_j(t) = sum_m s_{j,m} exp(-2 pi i (delta + m w) t)
  cplx time_domain(Channel c, double t) const;
  cplx time_derivative(Channel c, double t) const;
};

// Harmonic balance: (delta + m w - H)_{block} s = F e_{probe, m=0}, dense LU.
SidebandResponse steady_state_response(const ModelParams& p, const SimConfig& cfg, const Probe& probe);

// Same solve with a caller-built model, for repeated use across a grid.
SidebandResponse steady_state_response(const LabFrameModel& model, int truncation, const Probe& probe);

}  // namespace floqept::engine
