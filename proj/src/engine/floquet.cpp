#include "engine/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "numerics/bessel.hpp"
#include "numerics/ode.hpp"

namespace floqept::engine {

using numerics::I;
using numerics::pi;

std::string_view to_string(PhaseTag t) {
  switch (t) {
    case PhaseTag::unbroken: return "unbroken";
    case PhaseTag::ep: return "EP";
    case PhaseTag::broken: return "broken";
  }
  return "broken";
}

PhaseTag classify(double mismatch_abs, double coupling) {
  const double mu = std::abs(mismatch_abs);
  const double thr = 2.0 * std::abs(coupling);
  if (std::abs(mu - thr) <= ep_rel_tol * std::max({mu, thr, 1.0})) return PhaseTag::ep;
  return mu < thr ? PhaseTag::unbroken : PhaseTag::broken;
}

namespace {

// Branches of [[a, i g], [i g, b]] in closed form.
Branches two_level(double a, double b, double g, PhaseTag tag) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (a - b);
  const cplx root = std::sqrt(cplx(half * half - g * g, 0.0));
  ComplexMat h{{a, I * g}, {I * g, b}};
  Branches out;
  out.pair.values = {center + root, center - root};
  out.pair.vectors = {numerics::eigenvector_2x2(h, out.pair.values[0], 0),
                      numerics::eigenvector_2x2(h, out.pair.values[1], 1)};
  out.tag = tag;
  return out;
}

}  // namespace

ComplexMat static_hamiltonian(double delta0, double gamma_c) {
  return ComplexMat{{delta0, I * gamma_c}, {I * gamma_c, 0.0}};
}

Branches static_eigenvalues(double delta0, double gamma_c) {
  return two_level(delta0, 0.0, gamma_c, classify(delta0, gamma_c));
}

double effective_coupling(double gamma_c, double delta_b, double omega_b, int n1, int n2) {
  if (!(omega_b > 0)) fail(ErrorKind::invalid_argument, "effective_coupling: omega_b must be positive");
  const double x = delta_b / omega_b;
  return std::abs(numerics::bessel_j(n1, x) * numerics::bessel_j(n2, x)) * gamma_c;
}

double effective_coupling(const ModelParams& p) {
  return effective_coupling(p.gamma_c, p.delta_b, p.omega_b, p.n1, p.n2);
}

Branches floquet_eigenvalues(double delta0, double omega_b, int n, double gamma_eff) {
  const double nt = (delta0 < 0 ? -1.0 : 1.0) * n * omega_b;
  const double mu = std::abs(delta0) - n * omega_b;
  return two_level(delta0, nt, gamma_eff, classify(mu, gamma_eff));
}

ComplexMat RwaModel::matrix(bool with_decay) const {
  ComplexMat h{{delta0, I * gamma_eff}, {I * gamma_eff, n_omega}};
  if (with_decay) h(0, 0) -= I * gamma12, h(1, 1) -= I * gamma12;
  return h;
}

ComplexMat RwaModel::at(double t) const {
  const cplx ph = std::polar(1.0, -2.0 * pi * phase_rate() * t);
  return ComplexMat{{delta0, I * gamma_eff * ph}, {I * gamma_eff * std::conj(ph), n_omega}};
}

RwaModel build_rwa(const ModelParams& p) {
  RwaModel r;
  r.delta0 = p.delta0;
  r.n_omega = p.signed_order() * p.omega_b;
  r.gamma_eff = effective_coupling(p);
  r.gamma12 = p.gamma12;
  return r;
}

Branches rwa_eigenvalues(const ModelParams& p) {
  const RwaModel r = build_rwa(p);
  Branches b;
  b.pair = numerics::eig_small(r.matrix());
  b.tag = classify(p.mismatch(), r.gamma_eff);
  return b;
}

LabFrameModel::LabFrameModel(const ModelParams& p)
    : p_(p), omega_b_(p.omega_b), x_(p.delta_b / p.omega_b) {
  if (!(omega_b_ > 0)) fail(ErrorKind::invalid_argument, "lab-frame model: omega_b must be positive");
  dress_ = p.gamma_c * numerics::bessel_j(0, x_);
  bessel_ = numerics::bessel_j_all(64, x_);
}

void LabFrameModel::hamiltonian(double t, ComplexMat& h) const {
  const double th = 2.0 * pi * omega_b_ * t;
  const double mod = p_.delta_b * std::cos(th);
  const cplx ph = std::polar(1.0, -x_ * std::sin(th));
  h(0, 0) = cplx(p_.delta0 + mod, -p_.gamma12);
  h(1, 1) = cplx(mod, -p_.gamma12);
  h(0, 1) = I * dress_ * ph;
  h(1, 0) = I * dress_ * std::conj(ph);
}

ComplexMat LabFrameModel::hamiltonian(double t) const {
  ComplexMat h(2, 2);
  hamiltonian(t, h);
  return h;
}

namespace {

double cached_bessel(const std::vector<double>& table, int k, double x) {
  const int ak = std::abs(k);
  if (ak >= static_cast<int>(table.size())) return numerics::bessel_j(k, x);
  return (k < 0 && ak % 2) ? -table[ak] : table[ak];
}

}  // namespace

cplx LabFrameModel::h12_harmonic(int k) const {
  return I * dress_ * cached_bessel(bessel_, k, x_);
}

cplx LabFrameModel::h21_harmonic(int k) const {
  return I * dress_ * cached_bessel(bessel_, -k, x_);
}

double fold(double re, double omega_b) {
  double r = std::fmod(re + 0.5 * omega_b, omega_b);
  if (r < 0) r += omega_b;
  r -= 0.5 * omega_b;
  if (r >= 0.5 * omega_b) r -= omega_b;
  return r;
}

std::array<cplx, 2> QuasiEnergySet::unfolded() const {
  return {values[0] + static_cast<double>(zone_offsets[0]) * omega_b,
          values[1] + static_cast<double>(zone_offsets[1]) * omega_b};
}

double QuasiEnergySet::real_gap() const {
  double d = std::fmod(std::abs(values[0].real() - values[1].real()), omega_b);
  return std::min(d, omega_b - d);
}

double QuasiEnergySet::determinant_rel_error() const {
  return std::abs(determinant_abs - determinant_expected) / determinant_expected;
}

QuasiEnergySet monodromy_quasienergies(const ModelParams& p, const SimConfig& cfg) {
  require_valid(p, cfg);
  const LabFrameModel model(p);
  const double period = model.period();
  numerics::MatrixFunction h = [&](double t, ComplexMat& m) {
    model.hamiltonian(t, m);
    m *= 2.0 * pi;
  };
  numerics::OdeOptions opts;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  numerics::OdeStats stats;
  QuasiEnergySet q;
  q.omega_b = p.omega_b;
  q.monodromy = numerics::fundamental_matrix(h, 2, 0.0, period, opts, &stats);
  q.steps = stats.accepted;

  auto eig = numerics::eig_small(q.monodromy);
  const double refs[2] = {p.delta0, 0.0};
  for (int k = 0; k < 2; ++k) {
    const cplx lambda = eig.values[k];
    if (std::abs(lambda) < 1e-300)
      fail(ErrorKind::numerical, "monodromy eigenvalue below 1e-300; quasi-energy branch is ambiguous");
    const cplx nu = I * std::log(lambda) / (2.0 * pi * period);
    q.values[k] = cplx(fold(nu.real(), p.omega_b), nu.imag());
    q.floquet_modes[k] = eig.vectors[k];
    const int dominant = std::abs(eig.vectors[k][0]) >= std::abs(eig.vectors[k][1]) ? 0 : 1;
    q.zone_offsets[k] =
        static_cast<int>(std::lround((refs[dominant] - q.values[k].real()) / p.omega_b));
  }
  numerics::EigenPair folded;
  folded.values = {q.values[0], q.values[1]};
  folded.vectors = {ComplexVec{1.0, 0.0}, ComplexVec{0.0, 1.0}};
  numerics::sort_eigenpairs(folded);
  if (folded.values[0] != q.values[0]) {
    std::swap(q.values[0], q.values[1]);
    std::swap(q.zone_offsets[0], q.zone_offsets[1]);
    std::swap(q.floquet_modes[0], q.floquet_modes[1]);
  }

  q.determinant_abs = std::abs(numerics::determinant(q.monodromy));
  q.determinant_expected = std::exp(-4.0 * pi * p.gamma12 * period);
  if (q.determinant_rel_error() > 1e-6) {
    std::ostringstream msg;
    msg << "monodromy determinant " << q.determinant_abs << " differs from the decay identity "
        << q.determinant_expected << "; tighten rel_tol";
    fail(ErrorKind::numerical, msg.str());
  }
  return q;
}

cplx SidebandResponse::at(Channel c, int m) const {
  if (m < -truncation || m > truncation) return 0.0;
  return amplitudes[index(c) * (2 * truncation + 1) + static_cast<std::size_t>(m + truncation)];
}

double SidebandResponse::power(Channel c) const {
  double s = 0;
  for (int m = -truncation; m <= truncation; ++m) s += std::norm(at(c, m));
  return s;
}

cplx SidebandResponse::time_domain(Channel c, double t) const {
  cplx s = 0;
  for (int m = -truncation; m <= truncation; ++m)
    s += at(c, m) * std::polar(1.0, -2.0 * pi * (detuning + m * omega_b) * t);
  return s;
}

cplx SidebandResponse::time_derivative(Channel c, double t) const {
  cplx s = 0;
  for (int m = -truncation; m <= truncation; ++m) {
    const double f = detuning + m * omega_b;
    s += -2.0 * pi * I * f * at(c, m) * std::polar(1.0, -2.0 * pi * f * t);
  }
  return s;
}

SidebandResponse steady_state_response(const LabFrameModel& model, int truncation, const Probe& probe) {
  const ModelParams& p = model.params();
  const int mt = truncation;
  const std::size_t n = static_cast<std::size_t>(2 * mt + 1);
  auto idx = [&](int j, int m) { return static_cast<std::size_t>(j) * n + static_cast<std::size_t>(m + mt); };

  std::vector<cplx> h12(4 * mt + 1), h21(4 * mt + 1);
  for (int k = -2 * mt; k <= 2 * mt; ++k) {
    h12[k + 2 * mt] = model.h12_harmonic(k);
    h21[k + 2 * mt] = model.h21_harmonic(k);
  }
  ComplexMat a(2 * n, 2 * n);
  const double d[2] = {p.delta0, 0.0};
  for (int j = 0; j < 2; ++j)
    for (int m = -mt; m <= mt; ++m) {
      a(idx(j, m), idx(j, m)) = cplx(probe.detuning + m * p.omega_b - d[j], p.gamma12);
      if (m > -mt) a(idx(j, m), idx(j, m - 1)) = -0.5 * p.delta_b;
      if (m < mt) a(idx(j, m), idx(j, m + 1)) = -0.5 * p.delta_b;
    }
  for (int m = -mt; m <= mt; ++m)
    for (int mp = -mt; mp <= mt; ++mp) {
      a(idx(0, m), idx(1, mp)) = -h12[m - mp + 2 * mt];
      a(idx(1, m), idx(0, mp)) = -h21[m - mp + 2 * mt];
    }
  ComplexVec b(2 * n, 0.0);
  b[idx(static_cast<int>(index(probe.channel)), 0)] = probe.amplitude;

  SidebandResponse r;
  r.truncation = mt;
  r.detuning = probe.detuning;
  r.omega_b = p.omega_b;
  try {
    r.amplitudes = numerics::lu_solve(a, b);
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "harmonic-balance system singular at detuning " << probe.detuning
        << " Hz (undamped exact resonance?): " << e.what();
    fail(ErrorKind::numerical, msg.str());
  }
  ComplexVec ax = a.apply(r.amplitudes);
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] -= b[i];
  const double scale = a.frobenius_norm() * numerics::norm2(r.amplitudes) + numerics::norm2(b);
  r.residual = scale > 0 ? numerics::norm2(ax) / scale : 0.0;
  if (r.residual > 1e-10) {
    std::ostringstream msg;
    msg << "harmonic-balance residual " << r.residual << " above 1e-10 at detuning " << probe.detuning;
    fail(ErrorKind::numerical, msg.str());
  }
  return r;
}

SidebandResponse steady_state_response(const ModelParams& p, const SimConfig& cfg, const Probe& probe) {
  require_valid(p, cfg);
  if (probe.detuning < cfg.grid.start || probe.detuning > cfg.grid.stop)
    fail(ErrorKind::invalid_argument, "probe detuning outside the configured grid");
  return steady_state_response(LabFrameModel(p), cfg.truncation_m, probe);
}

}  // namespace floqept::engine
