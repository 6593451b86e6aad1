#include "coexist/nulling.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace coexist {

namespace {

void check_inputs(const ComplexVector& h0, std::span<const ComplexVector> victims) {
  if (h0.empty()) throw std::invalid_argument("nulling: empty desired channel");
  for (const auto& v : victims) {
    if (v.dim() != h0.dim()) {
      throw std::invalid_argument("nulling: victim channel dim " + std::to_string(v.dim()) +
                                  " != desired dim " + std::to_string(h0.dim()));
    }
  }
  if (!(h0.norm() > 0.0)) throw std::invalid_argument("nulling: desired channel is zero");
}

// Directions dropped below this residual carry no weight in Q at double
// precision; only exact or near-exact dependence is removed.
constexpr double kReductionRankTolerance = 1e-13;

double objective(const ComplexVector& w, const ComplexVector& h0n, std::span<const ComplexVector> victims,
                 double lambda) {
  double interference = 0.0;
  for (const auto& v : victims) interference += std::norm(inner_product(w, v));
  return std::norm(inner_product(w, h0n)) - lambda * interference;
}

Beamformer solve_full(const ComplexVector& h0, std::span<const ComplexVector> victims, double lambda,
                      const EigenOptions& eig) {
  const auto pair = principal_eigenvector(build_q(h0, victims, lambda), eig);
  return {pair.vector, pair.value, pair.degenerate};
}

Beamformer solve_regularized(const ComplexVector& h0, std::span<const ComplexVector> victims,
                             double lambda, const EigenOptions& eig) {
  const ComplexVector h0n = h0.normalized();
  std::vector<ComplexVector> generators{h0n};
  if (lambda > 0.0) generators.insert(generators.end(), victims.begin(), victims.end());
  const auto basis = orthonormal_basis(generators, kReductionRankTolerance);
  const std::size_t n = h0.dim();
  const std::size_t r = basis.size();
  if (r >= n) return solve_full(h0, victims, lambda, eig);

  const auto coords = [&](const ComplexVector& v) {
    ComplexVector c(r);
    for (std::size_t j = 0; j < r; ++j) c[j] = inner_product(basis[j], v);
    return c;
  };
  auto reduced = HermitianMatrix::zero(r);
  reduced.add_outer(coords(h0n), 1.0);
  if (lambda > 0.0) {
    for (const auto& v : victims) reduced.add_outer(coords(v), -lambda);
  }
  const auto pair = principal_eigenvector(reduced, eig);
  // the complement of the span has eigenvalue 0; it wins when the reduced
  // top eigenvalue is not positive
  if (!(pair.value > 0.0)) return solve_full(h0, victims, lambda, eig);

  ComplexVector w(n);
  for (std::size_t j = 0; j < r; ++j) axpy(pair.vector[j], basis[j], w);
  w *= 1.0 / w.norm();
  apply_phase_convention(w);
  return {w, objective(w, h0n, victims, lambda), pair.degenerate};
}

Beamformer solve_hard_null(const ComplexVector& h0, std::span<const ComplexVector> victims) {
  const std::size_t n = h0.dim();
  if (victims.size() >= n) {
    throw InfeasibleNullError("hard null: " + std::to_string(victims.size()) + " victims need more than " +
                              std::to_string(n) + " antennas");
  }
  const ComplexVector h0n = h0.normalized();
  const auto basis = orthonormal_basis(victims, kNullRankTolerance);
  ComplexVector p = project_out(h0n, basis);
  const double pn = p.norm();
  if (pn < kNullRankTolerance) {
    throw InfeasibleNullError("hard null: desired channel lies in the span of the victim channels");
  }
  p *= 1.0 / pn;
  return {p, std::norm(inner_product(p, h0n)), false};
}

}  // namespace

NullingConfig NullingConfig::regularized(double lambda, EigenOptions eigen) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("NullingConfig: lambda must be finite and >= 0");
  }
  return NullingConfig(lambda, eigen);
}

NullingConfig NullingConfig::hard_null(EigenOptions eigen) { return NullingConfig(std::nullopt, eigen); }

NullingConfig NullingConfig::from_lambda(double lambda, EigenOptions eigen) {
  if (lambda == std::numeric_limits<double>::infinity()) return hard_null(eigen);
  return regularized(lambda, eigen);
}

double NullingConfig::lambda() const {
  return lambda_ ? *lambda_ : std::numeric_limits<double>::infinity();
}

HermitianMatrix build_q(const ComplexVector& h0, std::span<const ComplexVector> victims, double lambda) {
  check_inputs(h0, victims);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("build_q: lambda must be finite and >= 0");
  }
  auto q = HermitianMatrix::zero(h0.dim());
  q.add_outer(h0.normalized(), 1.0);
  if (lambda > 0.0) {
    for (const auto& v : victims) q.add_outer(v, -lambda);
  }
  return q;
}

Beamformer solve_beamformer(const ComplexVector& h0, std::span<const ComplexVector> victims,
                            const NullingConfig& cfg) {
  check_inputs(h0, victims);
  if (cfg.is_hard_null()) return solve_hard_null(h0, victims);
  return solve_regularized(h0, victims, cfg.lambda(), cfg.eigen());
}

double snr0(const Beamformer& bf, const ComplexVector& h0, const LinkBudget& budget) {
  return budget.energy_dl_j() * std::norm(inner_product(bf.w, h0)) / budget.noise_energy_j();
}

double inr(const Beamformer& bf, const ComplexVector& h_victim, const LinkBudget& budget) {
  return budget.energy_dl_j() * std::norm(inner_product(bf.w, h_victim)) / budget.noise_energy_j();
}

}  // namespace coexist
