// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/sca.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qnoma {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kStartMargin = 1e-6;
constexpr double kStartFloor = 1e-6;
constexpr double kInteriorBlend = 1e-2;
constexpr std::size_t kNewtonPerStage = 200;
constexpr std::size_t kNewtonTotal = 4000;
// Squared Newton decrement below which full steps converge quadratically.
constexpr double kQuadraticRegion = 1.0 / 16.0;

void check_size(std::span<const double> P, const PowerSubproblem& sp) {
  if (P.size() != sp.size()) throw std::invalid_argument("power vector does not match members");
}

// suffix[k] = sum_{j >= k} P_j h_j, suffix[M] = 0.
std::vector<double> received_suffix(std::span<const double> P, const PowerSubproblem& sp) {
  std::vector<double> suffix(sp.size() + 1, 0.0);
  for (std::size_t k = sp.size(); k-- > 0;) suffix[k] = suffix[k + 1] + P[k] * sp.members[k].gain_h;
  return suffix;
}

// Largest c with c * P_max strictly inside every rate row, before flooring.
double uniform_scale(const PowerSubproblem& sp) {
  const std::size_t M = sp.size();
  double bound = std::numeric_limits<double>::infinity();
  double later = 0.0;  // sum_{j>k, active} P_max_j h_j / N0
  for (std::size_t k = M; k-- > 0;) {
    const auto& m = sp.members[k];
    const double own = m.power_cap_Pmax * m.gain_h / sp.noise_N0;
    if (m.rate_cap_Gamma > 0.0) {
      if (std::isfinite(m.rate_cap_Gamma)) {
        const double slope = own - m.rate_cap_Gamma * later;
        if (slope > 0.0) bound = std::min(bound, m.rate_cap_Gamma / slope);
      }
      later += own;
    }
  }
  double c = std::min(1.0, (1.0 - kStartMargin) * bound);
  if (c < kStartFloor && kStartFloor < bound) c = kStartFloor;
  return c;
}

// Barrier problem in normalized variables u_j = P_j / P_max_j over the
// members with Gamma > 0.
class BarrierProblem {
 public:
  BarrierProblem(const LinearizedL& lin, const PowerSubproblem& sp) : sp_(sp) {
    const std::size_t M = sp.size();
    for (std::size_t k = 0; k < M; ++k) {
      if (sp.members[k].rate_cap_Gamma > 0.0) active_.push_back(k);
    }
    const std::size_t n = active_.size();
    alpha_.resize(M);
    for (std::size_t k = 0; k < M; ++k) alpha_[k] = sca_alpha(sp, k);
    scale_s_.resize(n);
    linear_c_.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t j = active_[a];
      const auto& m = sp.members[j];
      scale_s_[a] = m.power_cap_Pmax * m.gain_h / sp.noise_N0;
      double coeff = m.coeff_b * m.power_cap_Pmax;
      for (std::size_t k = 0; k < j; ++k) coeff += alpha_[k] * lin.gradient[k][j] * m.power_cap_Pmax;
      linear_c_[a] = coeff;
    }

    for (std::size_t a = 0; a < n; ++a) {
      const auto& m = sp.members[active_[a]];
      const double gamma = m.rate_cap_Gamma;
      if (!std::isfinite(gamma) || gamma >= scale_s_[a]) continue;
      Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      row[static_cast<Eigen::Index>(a)] = scale_s_[a];
      for (std::size_t b = a + 1; b < n; ++b) row[static_cast<Eigen::Index>(b)] = -gamma * scale_s_[b];
      const double norm = row.norm();
      rows_.push_back(row / norm);
      rhs_.push_back(gamma / norm);
    }
  }

  std::size_t dimension() const noexcept { return active_.size(); }
  std::size_t constraint_count() const noexcept { return rows_.size() + 2 * active_.size(); }

  // Variable part of the surrogate: sum_k alpha_k log2(1 + G_k) - c.u
  double surrogate(const Eigen::VectorXd& u) const {
    const auto G = suffix(u);
    double value = 0.0;
    for (std::size_t k = 0; k < alpha_.size(); ++k) value += alpha_[k] * std::log1p(G[k]) / kLn2;
    for (std::size_t a = 0; a < active_.size(); ++a) value -= linear_c_[a] * u[static_cast<Eigen::Index>(a)];
    return value;
  }

  bool strictly_feasible(const Eigen::VectorXd& u) const {
    for (Eigen::Index a = 0; a < u.size(); ++a) {
      if (!(u[a] > 0.0 && u[a] < 1.0)) return false;
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!(rhs_[r] - rows_[r].dot(u) > 0.0)) return false;
    }
    return true;
  }

  // t * (-surrogate) - sum log(slacks); +inf outside the interior.
  double barrier_value(const Eigen::VectorXd& u, double t) const {
    if (!strictly_feasible(u)) return std::numeric_limits<double>::infinity();
    double value = -t * surrogate(u);
    for (Eigen::Index a = 0; a < u.size(); ++a) value -= std::log(u[a]) + std::log1p(-u[a]);
    for (std::size_t r = 0; r < rows_.size(); ++r) value -= std::log(rhs_[r] - rows_[r].dot(u));
    return value;
  }

  void barrier_derivatives(const Eigen::VectorXd& u, double t, Eigen::VectorXd& grad,
                           Eigen::MatrixXd& hess) const {
    const Eigen::Index n = u.size();
    const auto G = suffix(u);
    // Prefix sums over all members preceding each active index.
    std::vector<double> d1(active_.size()), d2(active_.size());
    double sum1 = 0.0, sum2 = 0.0;
    std::size_t k = 0;
    for (std::size_t a = 0; a < active_.size(); ++a) {
      for (; k <= active_[a]; ++k) {
        const double denom = 1.0 + G[k];
        sum1 += alpha_[k] / (denom * kLn2);
        sum2 += alpha_[k] / (denom * denom * kLn2);
      }
      d1[a] = sum1;
      d2[a] = sum2;
    }

    grad.resize(n);
    hess.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      grad[a] = -t * (scale_s_[ua] * d1[ua] - linear_c_[ua]);
      for (Eigen::Index b = 0; b <= a; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        const double h = t * scale_s_[ua] * scale_s_[ub] * d2[ub];
        hess(a, b) = h;
        hess(b, a) = h;
      }
      const double lo = u[a], hi = 1.0 - u[a];
      grad[a] += -1.0 / lo + 1.0 / hi;
      hess(a, a) += 1.0 / (lo * lo) + 1.0 / (hi * hi);
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const double slack = rhs_[r] - rows_[r].dot(u);
      grad += rows_[r] / slack;
      hess.noalias() += rows_[r] * rows_[r].transpose() / (slack * slack);
    }
  }

  // Largest step in (0, 1] keeping u + s * du strictly interior.
  double max_step(const Eigen::VectorXd& u, const Eigen::VectorXd& du) const {
    double step = 1.0;
    for (Eigen::Index a = 0; a < u.size(); ++a) {
      if (du[a] < 0.0) step = std::min(step, -u[a] / du[a]);
      if (du[a] > 0.0) step = std::min(step, (1.0 - u[a]) / du[a]);
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const double rate = rows_[r].dot(du);
      if (rate > 0.0) step = std::min(step, (rhs_[r] - rows_[r].dot(u)) / rate);
    }
    return step;
  }

  Eigen::VectorXd to_normalized(std::span<const double> P) const {
    Eigen::VectorXd u(static_cast<Eigen::Index>(active_.size()));
    for (std::size_t a = 0; a < active_.size(); ++a) {
      u[static_cast<Eigen::Index>(a)] = P[active_[a]] / sp_.members[active_[a]].power_cap_Pmax;
    }
    return u;
  }

  std::vector<double> to_power(const Eigen::VectorXd& u) const {
    std::vector<double> P(sp_.size(), 0.0);
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const double ua = std::clamp(u[static_cast<Eigen::Index>(a)], 0.0, 1.0);
      P[active_[a]] = ua * sp_.members[active_[a]].power_cap_Pmax;
    }
    return P;
  }

 private:
  std::vector<double> suffix(const Eigen::VectorXd& u) const {
    std::vector<double> G(sp_.size() + 1, 0.0);
    std::size_t a = active_.size();
    for (std::size_t k = sp_.size(); k-- > 0;) {
      G[k] = G[k + 1];
      if (a > 0 && active_[a - 1] == k) {
        --a;
        G[k] += scale_s_[a] * u[static_cast<Eigen::Index>(a)];
      }
    }
    return G;
  }

  const PowerSubproblem& sp_;
  std::vector<std::size_t> active_;
  std::vector<double> alpha_;
  std::vector<double> scale_s_;
  std::vector<double> linear_c_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<double> rhs_;
};

}  // namespace

double sca_alpha(const PowerSubproblem& sp, std::size_t k) { return sp.log_weight(k); }

double dc_objective(std::span<const double> P, const PowerSubproblem& sp) {
  check_size(P, sp);
  const auto suffix = received_suffix(P, sp);
  double value = 0.0;
  for (std::size_t k = 0; k < sp.size(); ++k) {
    const double g = std::log2(sp.noise_N0 + suffix[k]);
    const double l = std::log2(sp.noise_N0 + suffix[k + 1]);
    value += sca_alpha(sp, k) * (g - l) - sp.members[k].coeff_b * P[k];
  }
  return value;
}

double direct_objective(std::span<const double> P, const PowerSubproblem& sp) {
  check_size(P, sp);
  const auto suffix = received_suffix(P, sp);
  double value = 0.0;
  for (std::size_t k = 0; k < sp.size(); ++k) {
    const double sinr = P[k] * sp.members[k].gain_h / (sp.noise_N0 + suffix[k + 1]);
    value += sca_alpha(sp, k) * std::log1p(sinr) / kLn2 - sp.members[k].coeff_b * P[k];
  }
  return value;
}

std::vector<double> l_values(std::span<const double> P, const PowerSubproblem& sp) {
  check_size(P, sp);
  const auto suffix = received_suffix(P, sp);
  std::vector<double> l(sp.size());
  for (std::size_t k = 0; k < sp.size(); ++k) l[k] = std::log2(sp.noise_N0 + suffix[k + 1]);
  return l;
}

LinearizedL linearize_l(std::span<const double> anchor_P, const PowerSubproblem& sp) {
  check_size(anchor_P, sp);
  const std::size_t M = sp.size();
  const auto suffix = received_suffix(anchor_P, sp);
  LinearizedL lin;
  lin.anchor_P.assign(anchor_P.begin(), anchor_P.end());
  lin.values.resize(M);
  lin.gradient.assign(M, std::vector<double>(M, 0.0));
  for (std::size_t k = 0; k < M; ++k) {
    const double denom = sp.noise_N0 + suffix[k + 1];
    lin.values[k] = std::log2(denom);
    for (std::size_t j = k + 1; j < M; ++j) lin.gradient[k][j] = sp.members[j].gain_h / (denom * kLn2);
  }
  return lin;
}

double linearized_l_value(const LinearizedL& lin, std::size_t k, std::span<const double> P) {
  double value = lin.values[k];
  for (std::size_t j = k + 1; j < P.size(); ++j) value += lin.gradient[k][j] * (P[j] - lin.anchor_P[j]);
  return value;
}

double surrogate_objective(std::span<const double> P, const LinearizedL& lin,
                           const PowerSubproblem& sp) {
  check_size(P, sp);
  const auto suffix = received_suffix(P, sp);
  double value = 0.0;
  for (std::size_t k = 0; k < sp.size(); ++k) {
    const double g = std::log2(sp.noise_N0 + suffix[k]);
    value += sca_alpha(sp, k) * (g - linearized_l_value(lin, k, P)) - sp.members[k].coeff_b * P[k];
  }
  return value;
}

double max_constraint_violation(std::span<const double> P, const PowerSubproblem& sp) {
  check_size(P, sp);
  const auto suffix = received_suffix(P, sp);
  double worst = 0.0;
  for (std::size_t k = 0; k < sp.size(); ++k) {
    const auto& m = sp.members[k];
    worst = std::max({worst, -P[k], P[k] - m.power_cap_Pmax});
    if (std::isfinite(m.rate_cap_Gamma)) {
      // Row divided by h_k so the violation reads in watts.
      const double row = P[k] - m.rate_cap_Gamma * (suffix[k + 1] + sp.noise_N0) / m.gain_h;
      worst = std::max(worst, row);
    }
  }
  return worst;
}

std::vector<double> uniform_feasible_start(const PowerSubproblem& sp) {
  const double c = uniform_scale(sp);
  std::vector<double> P(sp.size(), 0.0);
  for (std::size_t k = 0; k < sp.size(); ++k) {
    if (sp.members[k].rate_cap_Gamma > 0.0) P[k] = c * sp.members[k].power_cap_Pmax;
  }
  return P;
}

std::vector<double> solve_convex_subproblem(const LinearizedL& lin, const PowerSubproblem& sp,
                                            double tolerance) {
  check_size(lin.anchor_P, sp);
  const BarrierProblem prob(lin, sp);
  const std::size_t n = prob.dimension();
  if (n == 0) return std::vector<double>(sp.size(), 0.0);

  const Eigen::VectorXd anchor = prob.to_normalized(lin.anchor_P);
  const Eigen::VectorXd inner =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 0.5 * uniform_scale(sp));
  Eigen::VectorXd u = (1.0 - kInteriorBlend) * anchor + kInteriorBlend * inner;
  if (!prob.strictly_feasible(u)) u = inner;
  if (!prob.strictly_feasible(u)) {
    throw SolverError("no strictly feasible interior point", lin.anchor_P);
  }

  const double m = static_cast<double>(prob.constraint_count());
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  double t = 1.0 / std::max(1.0, std::abs(prob.surrogate(u)));
  std::size_t newton_steps = 0;

  for (;;) {
    for (std::size_t it = 0; it < kNewtonPerStage; ++it) {
      if (++newton_steps > kNewtonTotal) {
        throw SolverError("barrier Newton iteration cap reached", prob.to_power(u));
      }
      prob.barrier_derivatives(u, t, grad, hess);
      const Eigen::VectorXd du = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(du);
      if (!std::isfinite(decrement) || decrement * 0.5 <= tolerance) break;

      double step = std::min(1.0, 0.99 * prob.max_step(u, du));
      if (decrement < kQuadraticRegion) {
        // Close enough for undamped steps; Armijo would only compare round-off here.
        u += step * du;
        continue;
      }
      const double f0 = prob.barrier_value(u, t);
      bool moved = false;
      while (step > 1e-12) {
        const Eigen::VectorXd trial = u + step * du;
        if (prob.barrier_value(trial, t) <= f0 - 0.25 * step * decrement) {
          u = trial;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (m / t <= tolerance * std::max(1.0, std::abs(prob.surrogate(u)))) break;
    t *= 10.0;
  }

  std::vector<double> P = prob.to_power(u);
  if (surrogate_objective(P, lin, sp) < surrogate_objective(lin.anchor_P, lin, sp)) {
    return lin.anchor_P;
  }
  return P;
}

ScaResult sca_power_allocation(const PowerSubproblem& sp, const ScaConfig& cfg) {
  ScaResult result;
  if (sp.empty()) {
    result.converged = true;
    return result;
  }
  std::vector<double> P = uniform_feasible_start(sp);
  double F = direct_objective(P, sp);
  result.trace.push_back({P, F, F, 0.0, 0});

  for (std::size_t k = 1; k <= cfg.k_max; ++k) {
    const LinearizedL lin = linearize_l(P, sp);
    std::vector<double> next;
    try {
      next = solve_convex_subproblem(lin, sp, cfg.subproblem_tol);
    } catch (const SolverError& err) {
      next = err.best_iterate();
      if (surrogate_objective(next, lin, sp) < surrogate_objective(P, lin, sp)) next = P;
    }
    const double F_next = direct_objective(next, sp);
    result.iterations = k;
    if (F_next < F) {
      // Round-off beat the minorization; the anchor is a fixed point.
      result.trace.push_back({P, F, surrogate_objective(P, lin, sp), 0.0, k});
      result.converged = true;
      break;
    }
    double step = 0.0;
    for (std::size_t j = 0; j < P.size(); ++j) step += (next[j] - P[j]) * (next[j] - P[j]);
    result.trace.push_back({next, F_next, surrogate_objective(next, lin, sp), std::sqrt(step), k});
    const bool done = std::abs(F_next - F) <= cfg.tol_eps;
    P = std::move(next);
    F = F_next;
    if (done) {
      result.converged = true;
      break;
    }
  }
  result.powers_P = std::move(P);
  return result;
}

Allocation sca_allocate(const Decision& x, const FrameObservation& obs, const SystemParams& p) {
  const PowerSubproblem sp = build_subproblem(x, obs, p);
  const ScaResult res = sca_power_allocation(sp, p.sca);
  return assemble_allocation(x, obs, p, sp, res.powers_P);
}

}  // namespace qnoma
