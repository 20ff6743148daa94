#include "numerics/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/error.hpp"

namespace floqept::numerics {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

void check_input(const ComplexMat& h) {
  if (!h.square() || h.rows() == 0) fail(ErrorKind::invalid_argument, "eigen: matrix must be square and non-empty");
  if (h.rows() > 64) fail(ErrorKind::invalid_argument, "eigen: matrix larger than 64x64");
  for (const auto& z : h.data())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      fail(ErrorKind::invalid_argument, "eigen: non-finite matrix entry");
}

void normalize(ComplexVec& v) {
  double n = norm2(v);
  if (n > 0)
    for (auto& z : v) z /= n;
}

}  // namespace

ComplexVec eigenvector_2x2(const ComplexMat& h, cplx nu, std::size_t fallback) {
  ComplexVec a{h(0, 1), nu - h(0, 0)};
  ComplexVec b{nu - h(1, 1), h(1, 0)};
  const double na = norm2(a), nb = norm2(b);
  const double tiny = 1e3 * eps * std::max(1.0, h.max_abs());
  ComplexVec v;
  if (std::max(na, nb) <= tiny) {
    v = ComplexVec(2, 0.0);
    v[fallback] = 1.0;
  } else {
    v = na >= nb ? a : b;
  }
  normalize(v);
  return v;
}

namespace {

EigenPair eig_2x2(const ComplexMat& h) {
  const cplx tr = h(0, 0) + h(1, 1);
  const cplx det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
  auto [l1, l2] = quadratic_eigenvalues(tr, det);
  EigenPair out;
  out.values = {l1, l2};
  out.vectors = {eigenvector_2x2(h, l1, 0), eigenvector_2x2(h, l2, 1)};
  return out;
}

void hessenberg(ComplexMat& a, ComplexMat& q) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0) continue;
    const cplx x0 = a(k + 1, k);
    const cplx phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx(1.0);
    ComplexVec v(n, 0.0);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] += phase * xnorm;
    normalize(v);
    // a <- (I - 2vv*) a
    for (std::size_t c = 0; c < n; ++c) {
      cplx d = 0;
      for (std::size_t i = k + 1; i < n; ++i) d += std::conj(v[i]) * a(i, c);
      for (std::size_t i = k + 1; i < n; ++i) a(i, c) -= 2.0 * v[i] * d;
    }
    // a <- a (I - 2vv*), q <- q (I - 2vv*)
    for (ComplexMat* m : {&a, &q}) {
      for (std::size_t r = 0; r < n; ++r) {
        cplx d = 0;
        for (std::size_t i = k + 1; i < n; ++i) d += (*m)(r, i) * v[i];
        for (std::size_t i = k + 1; i < n; ++i) (*m)(r, i) -= 2.0 * d * std::conj(v[i]);
      }
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0;
  }
}

cplx wilkinson_shift(const ComplexMat& h, std::size_t hi) {
  const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
  auto [m1, m2] = quadratic_eigenvalues(a + d, a * d - b * c);
  return std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
}

// Reduces the Hessenberg matrix t to upper-triangular Schur form, accumulating q.
void schur(ComplexMat& t, ComplexMat& q) {
  const std::size_t n = t.rows();
  const double scale = std::max(t.max_abs(), std::numeric_limits<double>::min());
  std::size_t hi = n - 1;
  int iter = 0, total = 0;
  std::vector<cplx> cs(n), sn(n);
  while (hi > 0) {
    std::size_t l = hi;
    while (l > 0) {
      const double sub = std::abs(t(l, l - 1));
      const double diag = std::abs(t(l - 1, l - 1)) + std::abs(t(l, l));
      if (sub <= eps * (diag > 0 ? diag : scale)) {
        t(l, l - 1) = 0;
        break;
      }
      --l;
    }
    if (l == hi) {
      --hi;
      iter = 0;
      continue;
    }
    if (++total > 100 * static_cast<int>(n))
      fail(ErrorKind::numerical, "eigen: QR iteration did not converge");
    ++iter;
    cplx mu = wilkinson_shift(t, hi);
    if (iter % 11 == 10) mu = t(hi, hi) + std::abs(t(hi, hi - 1)) * cplx(0.75, 0.4375);

    for (std::size_t i = l; i <= hi; ++i) t(i, i) -= mu;
    for (std::size_t k = l; k < hi; ++k) {
      const cplx x = t(k, k), y = t(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      cplx c = 1.0, s = 0.0;
      if (r > 0) c = x / r, s = y / r;
      cs[k] = c, sn[k] = s;
      for (std::size_t col = k; col < n; ++col) {
        const cplx u = t(k, col), w = t(k + 1, col);
        t(k, col) = std::conj(c) * u + std::conj(s) * w;
        t(k + 1, col) = -s * u + c * w;
      }
    }
    for (std::size_t k = l; k < hi; ++k) {
      const cplx c = cs[k], s = sn[k];
      const std::size_t rmax = std::min(k + 2, hi);
      for (std::size_t r = 0; r <= rmax; ++r) {
        const cplx u = t(r, k), w = t(r, k + 1);
        t(r, k) = u * c + w * s;
        t(r, k + 1) = -u * std::conj(s) + w * std::conj(c);
      }
      for (std::size_t r = 0; r < n; ++r) {
        const cplx u = q(r, k), w = q(r, k + 1);
        q(r, k) = u * c + w * s;
        q(r, k + 1) = -u * std::conj(s) + w * std::conj(c);
      }
    }
    for (std::size_t i = l; i <= hi; ++i) t(i, i) += mu;
  }
}

}  // namespace

std::pair<cplx, cplx> quadratic_eigenvalues(cplx trace, cplx det) {
  const cplx half = 0.5 * trace;
  const cplx root = std::sqrt(half * half - det);
  // Pick the sign that avoids cancellation, recover the other root from det.
  cplx big = std::real(std::conj(half) * root) >= 0 ? half + root : half - root;
  cplx small = std::abs(big) > 0 ? det / big : cplx(0.0);
  cplx l1 = big, l2 = small;
  EigenPair tmp;
  tmp.values = {l1, l2};
  tmp.vectors = {ComplexVec{1.0, 0.0}, ComplexVec{0.0, 1.0}};
  sort_eigenpairs(tmp);
  return {tmp.values[0], tmp.values[1]};
}

void sort_eigenpairs(EigenPair& pair) {
  const std::size_t n = pair.values.size();
  double scale = 0;
  for (const auto& z : pair.values) scale = std::max(scale, std::abs(z));
  const double tie = 1e-12 * std::max(scale, 1e-300);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto before = [&](std::size_t a, std::size_t b) {
    const cplx x = pair.values[a], y = pair.values[b];
    if (std::abs(x.real() - y.real()) > tie) return x.real() > y.real();
    return x.imag() > y.imag();
  };
  // Insertion sort: stable and well defined with the tolerance tie.
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i; j > 0 && before(idx[j], idx[j - 1]); --j) std::swap(idx[j], idx[j - 1]);
  EigenPair out;
  for (auto k : idx) {
    out.values.push_back(pair.values[k]);
    if (k < pair.vectors.size()) out.vectors.push_back(pair.vectors[k]);
  }
  pair = std::move(out);
}

EigenPair eig_qr(const ComplexMat& h) {
  check_input(h);
  const std::size_t n = h.rows();
  if (n == 1) return EigenPair{{h(0, 0)}, {ComplexVec{1.0}}};
  ComplexMat t = h;
  ComplexMat q = ComplexMat::identity(n);
  hessenberg(t, q);
  schur(t, q);

  const double tiny = eps * std::max(t.max_abs(), 1e-300);
  EigenPair out;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx lambda = t(k, k);
    ComplexVec y(n, 0.0);
    y[k] = 1.0;
    for (std::size_t i = k; i-- > 0;) {
      cplx acc = 0;
      for (std::size_t j = i + 1; j <= k; ++j) acc += t(i, j) * y[j];
      cplx d = t(i, i) - lambda;
      if (std::abs(d) < tiny) d = tiny;
      y[i] = -acc / d;
    }
    ComplexVec v = q.apply(y);
    normalize(v);
    out.values.push_back(lambda);
    out.vectors.push_back(std::move(v));
  }
  sort_eigenpairs(out);
  return out;
}

EigenPair eig_small(const ComplexMat& h) {
  check_input(h);
  if (h.rows() == 1) return EigenPair{{h(0, 0)}, {ComplexVec{1.0}}};
  if (h.rows() == 2) return eig_2x2(h);
  return eig_qr(h);
}

double eigen_residual(const ComplexMat& h, const EigenPair& pair) {
  double worst = 0;
  for (std::size_t k = 0; k < pair.values.size(); ++k) {
    ComplexVec hv = h.apply(pair.vectors[k]);
    for (std::size_t i = 0; i < hv.size(); ++i) hv[i] -= pair.values[k] * pair.vectors[k][i];
    worst = std::max(worst, norm2(hv));
  }
  return worst;
}

}  // namespace floqept::numerics
