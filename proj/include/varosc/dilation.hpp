#ifndef VAROSC_DILATION_HPP_
#define VAROSC_DILATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "varosc/averages.hpp"
#include "varosc/errors.hpp"
#include "varosc/linalg.hpp"
#include "varosc/rng.hpp"
#include "varosc/sequences.hpp"

namespace varosc {

inline constexpr std::size_t kDilationDimBudget = 4096;

// Defect operators D_T = (I - T*T)^{1/2} and D_{T*} = (I - T T*)^{1/2}.
// A norm violation surfaces as a not-PSD rejection inside psd_sqrt.
inline std::pair<Operator, Operator> defects(const Operator& t) {
  const Operator id = Operator::identity(t.dim());
  return {psd_sqrt(id - t.adjoint() * t), psd_sqrt(id - t * t.adjoint())};
}

// Unitary on (N+1) copies of the base space whose compressed powers
// reproduce T^j for all j <= N.
struct DilationPack {
  Operator u;            // unitary on dimension (N+1) * d
  std::int64_t steps;    // N, the certified power range
  std::size_t base_dim;  // d

  std::size_t full_dim() const { return u.dim(); }

  // Injection of the base space as the first block.
  HVector embed(const HVector& f) const {
    if (f.dim() != base_dim) throw invalid_argument("DilationPack::embed: dimension mismatch");
    HVector v = HVector::zero(full_dim());
    for (std::size_t i = 0; i < base_dim; ++i) v[i] = f[i];
    return v;
  }

  // Block projection back onto the base space.
  HVector project(const HVector& v) const {
    if (v.dim() != full_dim())
      throw invalid_argument("DilationPack::project: dimension mismatch");
    HVector f = HVector::zero(base_dim);
    for (std::size_t i = 0; i < base_dim; ++i) f[i] = v[i];
    return f;
  }
};

// Block layout on (N+1) copies of the base space:
//   block(0,0) = T        block(0,N) = D_{T*}
//   block(1,0) = D_T      block(1,N) = -T*
//   block(i,i-1) = I      for i = 2..N
// Column orthogonality at the corners reduces to T* D_{T*} = D_T T*.
inline DilationPack build_dilation(const Operator& t, std::int64_t n_steps) {
  if (n_steps < 1) throw invalid_argument("build_dilation: N must be >= 1");
  const std::size_t d = t.dim();
  const std::size_t blocks = static_cast<std::size_t>(n_steps) + 1;
  if (blocks > kDilationDimBudget / d)
    throw resource_error("build_dilation: (N+1)*dim = " + std::to_string(blocks * d) +
                         " exceeds dimension budget " + std::to_string(kDilationDimBudget));

  const auto [d_t, d_tstar] = defects(t);
  Operator u(blocks * d, OperatorRole::unitary);
  const auto put = [&](std::size_t bi, std::size_t bj, const Operator& m, cplx scale) {
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) u.at(bi * d + r, bj * d + c) = scale * m.at(r, c);
  };
  put(0, 0, t, 1.0);
  put(0, blocks - 1, d_tstar, 1.0);
  put(1, 0, d_t, 1.0);
  put(1, blocks - 1, t.adjoint(), -1.0);
  const Operator id = Operator::identity(d);
  for (std::size_t i = 2; i < blocks; ++i) put(i, i - 1, id, 1.0);
  return {std::move(u), n_steps, d};
}

struct DilationReport {
  std::size_t dim = 0;
  std::int64_t steps = 0;
  double unitarity_residual = 0.0;
  double max_power_error = 0.0;   // max over j <= N, sampled f of ||P U^j i f - T^j f||
  double functional_gap = 0.0;    // |variation of T - projected variation of U|
  double projection_excess = 0.0; // max of ||P v|| - ||v|| over sampled v (<= 0 expected)
  double dilation_space_slack = 0.0;  // dilation-space variation minus the T variation
};

// Residual certification of the pack.  Failures are reported, never thrown.
inline DilationReport verify_dilation(const DilationPack& pack, const Operator& t,
                                      int trials, std::uint64_t seed) {
  if (t.dim() != pack.base_dim)
    throw invalid_argument("verify_dilation: operator does not match pack");
  if (trials < 1) throw invalid_argument("verify_dilation: trials must be >= 1");

  DilationReport rep;
  rep.dim = pack.base_dim;
  rep.steps = pack.steps;
  rep.unitarity_residual = unitarity_residual(pack.u);

  // power-of-two checkpoints inside the certified range
  std::vector<std::int64_t> cps;
  for (std::int64_t n = 2; n <= pack.steps; n *= 2) cps.push_back(n);

  for (int trial = 0; trial < trials; ++trial) {
    const HVector f = random_unit_vector(pack.base_dim, derive_seed(seed, trial));

    HVector big = pack.embed(f);
    HVector small = f;
    for (std::int64_t j = 1; j <= pack.steps; ++j) {
      big = pack.u.apply(big);
      small = t.apply(small);
      rep.max_power_error =
          std::max(rep.max_power_error, (pack.project(big) - small).norm());
    }

    rep.projection_excess =
        std::max(rep.projection_excess, pack.project(big).norm() - big.norm());

    if (cps.size() >= 2) {
      const LacunarySeq nk = LacunarySeq::from_terms(cps);
      const double direct = variation_sum(t, f, nk, 1.0);
      const AverageTrace big_trace =
          average_stream(pack.u, pack.embed(f), CheckpointPlan::from(nk));
      double projected = 0.0, unprojected = 0.0;
      for (std::size_t k = 0; k + 1 < big_trace.rows.size(); ++k) {
        const HVector diff = big_trace.rows[k + 1].second - big_trace.rows[k].second;
        projected += pack.project(diff).norm();
        unprojected += diff.norm();
      }
      rep.functional_gap = std::max(rep.functional_gap, std::abs(direct - projected));
      rep.dilation_space_slack = std::max(rep.dilation_space_slack, direct - unprojected);
    }
  }
  return rep;
}

}  // namespace varosc

#endif  // VAROSC_DILATION_HPP_
