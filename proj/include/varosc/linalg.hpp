#ifndef VAROSC_LINALG_HPP_
#define VAROSC_LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "varosc/errors.hpp"
#include "varosc/rng.hpp"

namespace varosc {

using cplx = std::complex<double>;

inline constexpr double kUnitaryTolPerDim = 1e-10;   // residual budget is tol * dim
inline constexpr double kContractionTol = 1e-9;
inline constexpr double kPsdClipTol = 1e-10;

// ---------------------------------------------------------------------------
// HVector: finite complex coordinate vector with the Euclidean norm.
// ---------------------------------------------------------------------------

class HVector {
public:
  explicit HVector(std::vector<cplx> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw invalid_argument("HVector: dimension must be >= 1");
  }

  static HVector zero(std::size_t dim) {
    if (dim == 0) throw invalid_argument("HVector: dimension must be >= 1");
    return HVector(std::vector<cplx>(dim));
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  const std::vector<cplx>& coords() const noexcept { return coords_; }
  cplx& operator[](std::size_t i) { return coords_[i]; }
  const cplx& operator[](std::size_t i) const { return coords_[i]; }

  double norm() const {
    double s = 0.0;
    for (const cplx& c : coords_) s += std::norm(c);
    return std::sqrt(s);
  }

  HVector& operator+=(const HVector& o) {
    check_dim(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  HVector& operator-=(const HVector& o) {
    check_dim(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  HVector& operator*=(cplx a) {
    for (cplx& c : coords_) c *= a;
    return *this;
  }

private:
  void check_dim(const HVector& o) const {
    if (o.dim() != dim()) throw invalid_argument("HVector: dimension mismatch");
  }
  std::vector<cplx> coords_;
};

inline HVector operator+(HVector a, const HVector& b) { return a += b; }
inline HVector operator-(HVector a, const HVector& b) { return a -= b; }
inline HVector operator*(cplx a, HVector v) { return v *= a; }

// Inner product, conjugate-linear in the first argument.
inline cplx inner(const HVector& a, const HVector& b) {
  if (a.dim() != b.dim()) throw invalid_argument("inner: dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// Operator: dense square complex matrix with a role tag.
// ---------------------------------------------------------------------------

enum class OperatorRole { unitary, contraction, general };

inline const char* role_name(OperatorRole r) {
  switch (r) {
    case OperatorRole::unitary: return "unitary";
    case OperatorRole::contraction: return "contraction";
    default: return "general";
  }
}

class Operator {
public:
  explicit Operator(std::size_t dim, OperatorRole role = OperatorRole::general)
      : dim_(require_dim(dim)), role_(role), e_(dim * dim) {}

  Operator(std::size_t dim, std::vector<cplx> entries, OperatorRole role = OperatorRole::general)
      : dim_(require_dim(dim)), role_(role), e_(std::move(entries)) {
    if (e_.size() != dim_ * dim_) throw invalid_argument("Operator: entry count != dim^2");
  }

  static Operator identity(std::size_t dim) {
    Operator a(dim, OperatorRole::unitary);
    for (std::size_t i = 0; i < dim; ++i) a.at(i, i) = 1.0;
    return a;
  }

  static Operator diagonal(const std::vector<cplx>& d, OperatorRole role = OperatorRole::general) {
    Operator a(d.size(), role);
    for (std::size_t i = 0; i < d.size(); ++i) a.at(i, i) = d[i];
    return a;
  }

  std::size_t dim() const noexcept { return dim_; }
  OperatorRole role() const noexcept { return role_; }
  void set_role(OperatorRole r) noexcept { role_ = r; }

  cplx& at(std::size_t i, std::size_t j) { return e_[i * dim_ + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return e_[i * dim_ + j]; }

  HVector apply(const HVector& v) const {
    if (v.dim() != dim_) throw invalid_argument("Operator::apply: dimension mismatch");
    HVector out = HVector::zero(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      cplx s = 0.0;
      const cplx* row = &e_[i * dim_];
      for (std::size_t j = 0; j < dim_; ++j) s += row[j] * v[j];
      out[i] = s;
    }
    return out;
  }

  Operator adjoint() const {
    Operator a(dim_, role_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) a.at(j, i) = std::conj(at(i, j));
    return a;
  }

  Operator& operator+=(const Operator& o) {
    check_dim(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    role_ = OperatorRole::general;
    return *this;
  }
  Operator& operator-=(const Operator& o) {
    check_dim(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    role_ = OperatorRole::general;
    return *this;
  }
  Operator& operator*=(cplx a) {
    for (cplx& c : e_) c *= a;
    role_ = OperatorRole::general;
    return *this;
  }

private:
  static std::size_t require_dim(std::size_t dim) {
    if (dim == 0) throw invalid_argument("Operator: dimension must be >= 1");
    return dim;
  }
  void check_dim(const Operator& o) const {
    if (o.dim_ != dim_) throw invalid_argument("Operator: dimension mismatch");
  }

  std::size_t dim_;
  OperatorRole role_;
  std::vector<cplx> e_;  // row-major
};

inline Operator operator+(Operator a, const Operator& b) { return a += b; }
inline Operator operator-(Operator a, const Operator& b) { return a -= b; }
inline Operator operator*(cplx s, Operator a) { return a *= s; }

inline Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw invalid_argument("Operator: dimension mismatch");
  const std::size_t n = a.dim();
  Operator c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a.at(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  }
  return c;
}

// Entrywise max modulus.
inline double max_abs(const Operator& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a.at(i, j)));
  return m;
}

inline double unitarity_residual(const Operator& a) {
  return max_abs(a.adjoint() * a - Operator::identity(a.dim()));
}

inline bool is_unitary(const Operator& a, double tol) {
  if (tol <= 0.0) throw invalid_argument("is_unitary: tol must be > 0");
  return unitarity_residual(a) <= tol;
}

// ---------------------------------------------------------------------------
// Constructors of the test ensembles.
// ---------------------------------------------------------------------------

// Diagonal operator with entries e^{i theta_j}.
inline Operator make_diagonal_unitary(const std::vector<double>& phases) {
  if (phases.empty()) throw invalid_argument("make_diagonal_unitary: empty phase list");
  std::vector<cplx> d;
  d.reserve(phases.size());
  for (double t : phases) {
    if (!std::isfinite(t)) throw invalid_argument("make_diagonal_unitary: non-finite phase");
    d.push_back(std::polar(1.0, t));
  }
  return Operator::diagonal(d, OperatorRole::unitary);
}

// Haar-like unitary: complex Gaussian matrix orthonormalized column by
// column.  Modified Gram-Schmidt is run twice; the resulting triangular
// factor has positive real diagonal, which is exactly the phase-corrected
// (each diagonal factor of modulus 1) convention.
inline Operator random_unitary(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw invalid_argument("random_unitary: dim must be >= 1");
  SplitMix64 rng(seed);
  Operator g(dim, OperatorRole::unitary);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g.at(i, j) = complex_gaussian(rng);

  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx proj = 0.0;
        for (std::size_t i = 0; i < dim; ++i) proj += std::conj(g.at(i, k)) * g.at(i, j);
        for (std::size_t i = 0; i < dim; ++i) g.at(i, j) -= proj * g.at(i, k);
      }
      double nrm = 0.0;
      for (std::size_t i = 0; i < dim; ++i) nrm += std::norm(g.at(i, j));
      nrm = std::sqrt(nrm);
      if (nrm < 1e-150) throw resource_error("random_unitary: degenerate Gaussian draw");
      for (std::size_t i = 0; i < dim; ++i) g.at(i, j) /= nrm;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Operator norm by power iteration on A*A.
// ---------------------------------------------------------------------------

namespace detail {

inline double rayleigh_power(const Operator& m, std::vector<cplx> v) {
  const std::size_t n = m.dim();
  double nv = 0.0;
  for (const cplx& c : v) nv += std::norm(c);
  nv = std::sqrt(nv);
  if (nv == 0.0) return 0.0;
  for (cplx& c : v) c /= nv;

  double lam = 0.0;
  std::vector<cplx> w(n);
  for (int iter = 0; iter < 100000; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m.at(i, j) * v[j];
      w[i] = s;
    }
    cplx q = 0.0;
    double nw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      q += std::conj(v[i]) * w[i];
      nw += std::norm(w[i]);
    }
    const double lam_new = q.real();
    nw = std::sqrt(nw);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (std::abs(lam_new - lam) <= 1e-13 * std::max(std::abs(lam_new), 1e-300)) return lam_new;
    lam = lam_new;
  }
  return lam;
}

}  // namespace detail

// Largest singular value.  Power iteration on A*A with the fixed all-ones
// start, plus the index-weighted deterministic restart; the larger Rayleigh
// limit of the two is returned, which covers starts orthogonal to the top
// singular space.
inline double operator_norm(const Operator& a) {
  const std::size_t n = a.dim();
  const Operator m = a.adjoint() * a;
  if (max_abs(m) == 0.0) return 0.0;

  std::vector<cplx> ones(n, cplx{1.0, 0.0});
  std::vector<cplx> ramp(n);
  for (std::size_t i = 0; i < n; ++i) ramp[i] = cplx(static_cast<double>(i + 1), 0.0);

  const double lam = std::max(detail::rayleigh_power(m, std::move(ones)),
                              detail::rayleigh_power(m, std::move(ramp)));
  return std::sqrt(std::max(lam, 0.0));
}

// Random matrix rescaled so operator_norm equals norm_cap.
inline Operator random_contraction(std::size_t dim, std::uint64_t seed, double norm_cap) {
  if (dim == 0) throw invalid_argument("random_contraction: dim must be >= 1");
  if (!(norm_cap > 0.0) || norm_cap > 1.0)
    throw invalid_argument("random_contraction: norm_cap must be in (0, 1]");
  SplitMix64 rng(seed);
  Operator g(dim, OperatorRole::contraction);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g.at(i, j) = complex_gaussian(rng);
  const double s = operator_norm(g);
  if (s == 0.0) throw resource_error("random_contraction: degenerate Gaussian draw");
  const double scale = norm_cap / s;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g.at(i, j) *= scale;
  g.set_role(OperatorRole::contraction);
  return g;
}

// Gaussian vector normalized to unit Euclidean norm.
inline HVector random_unit_vector(std::size_t dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  HVector f = HVector::zero(dim);
  for (std::size_t i = 0; i < dim; ++i) f[i] = complex_gaussian(rng);
  const double n = f.norm();
  if (n < 1e-150) throw resource_error("random_unit_vector: degenerate Gaussian draw");
  f *= cplx{1.0 / n, 0.0};
  return f;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic Jacobi) and the PSD square root.
// ---------------------------------------------------------------------------

struct HermitianEigen {
  std::vector<double> values;  // ascending
  Operator vectors;            // columns are eigenvectors, H = V diag(values) V*
};

// Cyclic Jacobi on the Hermitian part of h.  Small dense matrices only;
// each rotation zeroes one off-diagonal pair.
inline HermitianEigen jacobi_hermitian(const Operator& h) {
  const std::size_t n = h.dim();
  Operator a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a.at(i, j) = 0.5 * (h.at(i, j) + std::conj(h.at(j, i)));
  Operator v = Operator::identity(n);

  double scale = max_abs(a);
  if (scale == 0.0) scale = 1.0;
  const double thresh = 1e-15 * scale;

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a.at(p, q)));
    if (off <= thresh) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a.at(p, q);
        const double r = std::abs(apq);
        if (r <= thresh) continue;
        const cplx phase = apq / r;  // e^{i phi}
        const double tau = (a.at(q, q).real() - a.at(p, p).real()) / (2.0 * r);
        // small-magnitude root of t^2 - 2 tau t - 1 = 0
        const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx sp = s * phase;  // G_pq = -s e^{i phi}, G_qp = s e^{-i phi}

        // A <- G* A G, applied as row then column updates.
        for (std::size_t j = 0; j < n; ++j) {
          const cplx apj = a.at(p, j), aqj = a.at(q, j);
          a.at(p, j) = c * apj + sp * aqj;
          a.at(q, j) = -std::conj(sp) * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cplx aip = a.at(i, p), aiq = a.at(i, q);
          a.at(i, p) = c * aip + std::conj(sp) * aiq;
          a.at(i, q) = -sp * aip + c * aiq;
          const cplx vip = v.at(i, p), viq = v.at(i, q);
          v.at(i, p) = c * vip + std::conj(sp) * viq;
          v.at(i, q) = -sp * vip + c * viq;
        }
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a.at(i, i).real() < a.at(j, j).real();
  });

  HermitianEigen out{std::vector<double>(n), Operator(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a.at(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors.at(i, k) = v.at(i, order[k]);
  }
  return out;
}

// Hermitian PSD square root via eigendecomposition.  Eigenvalues in
// [-kPsdClipTol, 0) are clipped to zero; anything below that is rejected.
inline Operator psd_sqrt(const Operator& h) {
  const std::size_t n = h.dim();
  double herm_dev = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      herm_dev = std::max(herm_dev, std::abs(h.at(i, j) - std::conj(h.at(j, i))));
  if (herm_dev > 1e-10)
    throw invalid_argument("psd_sqrt: input is not Hermitian (deviation " +
                           std::to_string(herm_dev) + ")");

  HermitianEigen eig = jacobi_hermitian(h);
  for (double& lam : eig.values) {
    if (lam < -kPsdClipTol)
      throw not_psd_error("psd_sqrt: eigenvalue " + std::to_string(lam) +
                          " below -psd_clip_tol");
    lam = lam < 0.0 ? 0.0 : lam;
  }

  Operator s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += eig.vectors.at(i, k) * std::sqrt(eig.values[k]) * std::conj(eig.vectors.at(j, k));
      s.at(i, j) = acc;
    }
  }
  // symmetrize away rotation round-off
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const cplx m = 0.5 * (s.at(i, j) + std::conj(s.at(j, i)));
      s.at(i, j) = m;
      s.at(j, i) = std::conj(m);
    }
  return s;
}

}  // namespace varosc

#endif  // VAROSC_LINALG_HPP_
