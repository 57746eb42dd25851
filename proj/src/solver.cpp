#include "chebplan/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "chebplan/autodiff.hpp"

namespace chebplan {

namespace {

constexpr int kLanes = 16;
using Dual16 = Dual<kLanes>;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMultiplierCap = 1e12;
constexpr double kPenaltyCap = 1e10;

struct Evaluation {
  double f = 0.0;
  Eigen::VectorXd grad_f;
  Eigen::VectorXd c;   // equalities, = 0
  Eigen::VectorXd g;   // inequalities, <= 0
  Eigen::MatrixXd jc;  // d c / d z
  Eigen::MatrixXd jg;  // d g / d z
};

class Workspace {
 public:
  explicit Workspace(const NlpProblem& p)
      : p_(p), dim_(p.layout.dim()), zd_(static_cast<std::size_t>(dim_)),
        zb_(static_cast<std::size_t>(dim_)) {}

  // Values only; used by the line search.
  void values(const Eigen::VectorXd& z, double& f, Eigen::VectorXd& c, Eigen::VectorXd& g) {
    for (int i = 0; i < dim_; ++i) zd_[static_cast<std::size_t>(i)] = z[i];
    f = p_.cost(zd_);
    p_.eval_all(zd_, &eqd_, &ind_);
    c = Eigen::Map<const Eigen::VectorXd>(eqd_.data(), static_cast<int>(eqd_.size()));
    g = Eigen::Map<const Eigen::VectorXd>(ind_.data(), static_cast<int>(ind_.size()));
  }

  // Values plus dense Jacobians by forward sweeps of kLanes directions.
  void with_jacobians(const Eigen::VectorXd& z, Evaluation& e) {
    e.grad_f.setZero(dim_);
    e.c.resize(p_.num_eq());
    e.g.resize(p_.num_ineq());
    e.jc.resize(p_.num_eq(), dim_);
    e.jg.resize(p_.num_ineq(), dim_);
    for (int base = 0; base < dim_; base += kLanes) {
      const int w = std::min(kLanes, dim_ - base);
      for (int i = 0; i < dim_; ++i) zb_[static_cast<std::size_t>(i)] = Dual16(z[i]);
      for (int lane = 0; lane < w; ++lane)
        zb_[static_cast<std::size_t>(base + lane)] = Dual16::seeded(z[base + lane], lane);
      const Dual16 cost = p_.cost(zb_);
      p_.eval_all(zb_, &eqb_, &inb_);
      if (base == 0) {
        e.f = cost.v;
        for (int r = 0; r < e.c.size(); ++r) e.c[r] = eqb_[static_cast<std::size_t>(r)].v;
        for (int r = 0; r < e.g.size(); ++r) e.g[r] = inb_[static_cast<std::size_t>(r)].v;
      }
      for (int lane = 0; lane < w; ++lane) {
        e.grad_f[base + lane] = cost.d[static_cast<std::size_t>(lane)];
        for (int r = 0; r < e.c.size(); ++r)
          e.jc(r, base + lane) = eqb_[static_cast<std::size_t>(r)].d[static_cast<std::size_t>(lane)];
        for (int r = 0; r < e.g.size(); ++r)
          e.jg(r, base + lane) = inb_[static_cast<std::size_t>(r)].d[static_cast<std::size_t>(lane)];
      }
    }
  }

 private:
  const NlpProblem& p_;
  int dim_;
  std::vector<double> zd_, eqd_, ind_;
  std::vector<Dual16> zb_, eqb_, inb_;
};

double augmented_lagrangian(double f, const Eigen::VectorXd& c, const Eigen::VectorXd& g,
                            const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                            double rho) {
  double phi = f + lambda.dot(c) + 0.5 * rho * c.squaredNorm();
  for (int i = 0; i < g.size(); ++i) {
    const double t = std::max(0.0, mu[i] + rho * g[i]);
    phi += (t * t - mu[i] * mu[i]) / (2.0 * rho);
  }
  return phi;
}

Eigen::VectorXd augmented_gradient(const Evaluation& e, const Eigen::VectorXd& lambda,
                                   const Eigen::VectorXd& mu, double rho) {
  Eigen::VectorXd grad = e.grad_f;
  if (e.c.size() > 0) grad += e.jc.transpose() * (lambda + rho * e.c);
  if (e.g.size() > 0) grad += e.jg.transpose() * (mu + rho * e.g).cwiseMax(0.0);
  return grad;
}

Eigen::VectorXd project(const Eigen::VectorXd& z, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
  return z.cwiseMax(lo).cwiseMin(hi);
}

double ineq_violation(const Eigen::VectorXd& g) {
  return g.size() ? std::max(0.0, g.maxCoeff()) : 0.0;
}

double eq_violation(const Eigen::VectorXd& c) {
  return c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

PlanSolution solve(const NlpProblem& p, const NlpGuess& guess, bool warm) {
  const auto t_start = std::chrono::steady_clock::now();
  const int dim = p.layout.dim();
  const int m_eq = p.num_eq();
  const int m_in = p.num_ineq();
  const SolverParams& sp = p.solver;

  Workspace ws(p);
  Eigen::VectorXd z = project(guess.z, p.var_lo, p.var_hi);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m_eq);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(m_in);
  if (warm && guess.lambda_eq.size() == m_eq) lambda = guess.lambda_eq;
  if (warm && guess.mu_ineq.size() == m_in) mu = guess.mu_ineq.cwiseMax(0.0);

  double rho = sp.initial_penalty;
  double omega = std::max(1e-3, sp.tol_stationarity);  // inner stationarity target
  double eta = 0.1;                                    // violation target for updates
  const double eta_floor = 0.5 * std::min(sp.tol_eq, sp.tol_ineq);

  PlanSolution best;
  best.status = SolveStatus::kMaxIter;
  double best_score = kInf;
  int total_inner = 0;
  double exit_pg = kInf;

  Evaluation e;
  auto record_best = [&](const Eigen::VectorXd& zz, const Evaluation& ee, double pg,
                         bool force = false) {
    const double viol = std::max(eq_violation(ee.c), ineq_violation(ee.g));
    const double score = viol * 1e6 + ee.f;
    if (force || score < best_score) {
      best_score = score;
      unpack_decision(p.layout, zz, best.node_states, best.node_controls, best.delta_t);
      best.lambda_eq = lambda;
      best.mu_ineq = mu;
      best.kkt.stationarity = pg;
      best.kkt.eq_violation = eq_violation(ee.c);
      best.kkt.ineq_violation = ineq_violation(ee.g);
      best.kkt.bound_violation = 0.0;
    }
  };

  bool fault = false;

  try {
    ws.with_jacobians(z, e);
    if (!std::isfinite(e.f) || !e.c.allFinite() || !e.g.allFinite()) throw EvalFault("initial point");

    for (int outer = 0; outer < sp.max_outer_iters; ++outer) {
      double phi = augmented_lagrangian(e.f, e.c, e.g, lambda, mu, rho);
      Eigen::VectorXd grad = augmented_gradient(e, lambda, mu, rho);
      double pg = kInf;
      double damping = 1e-6;

      int it = 0;
      for (; it < sp.max_inner_iters; ++it) {
        pg = (z - project(z - grad, p.var_lo, p.var_hi)).cwiseAbs().maxCoeff();
        if (pg <= omega) break;

        // Two-metric projection: coordinates pinned or pressed against an
        // active bound are frozen for this step.
        std::vector<int> free_idx;
        free_idx.reserve(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) {
          const double eps = 1e-10 * std::max(1.0, std::abs(z[i]));
          const bool at_lo = z[i] <= p.var_lo[i] + eps;
          const bool at_hi = z[i] >= p.var_hi[i] - eps;
          if (p.var_lo[i] == p.var_hi[i] || (at_lo && grad[i] > 0) || (at_hi && grad[i] < 0))
            continue;
          free_idx.push_back(i);
        }
        const int nf = static_cast<int>(free_idx.size());
        if (nf == 0) break;  // fully pinned

        // Damped Gauss-Newton model of the augmented Lagrangian on the free
        // subspace: H = rho (Jc^T Jc + Jg_act^T Jg_act) + damping, where the
        // active set holds rows with mu + rho g > 0.
        std::vector<int> act_rows;
        for (int r = 0; r < m_in; ++r)
          if (mu[r] + rho * e.g[r] > 0.0) act_rows.push_back(r);
        Eigen::MatrixXd stacked(m_eq + static_cast<int>(act_rows.size()), nf);
        for (int r = 0; r < m_eq; ++r)
          for (int j = 0; j < nf; ++j) stacked(r, j) = e.jc(r, free_idx[static_cast<std::size_t>(j)]);
        for (std::size_t a = 0; a < act_rows.size(); ++a)
          for (int j = 0; j < nf; ++j)
            stacked(m_eq + static_cast<int>(a), j) = e.jg(act_rows[a], free_idx[static_cast<std::size_t>(j)]);

        Eigen::MatrixXd h = rho * (stacked.transpose() * stacked);
        Eigen::VectorXd g_free(nf);
        for (int j = 0; j < nf; ++j) g_free[j] = grad[free_idx[static_cast<std::size_t>(j)]];

        Eigen::VectorXd d_free;
        bool descent = false;
        for (int attempt = 0; attempt < 12 && !descent; ++attempt) {
          Eigen::MatrixXd hd = h;
          const double lm = damping * std::max(1.0, h.diagonal().maxCoeff());
          hd.diagonal().array() += lm;
          Eigen::LLT<Eigen::MatrixXd> llt(hd);
          if (llt.info() == Eigen::Success) {
            d_free = llt.solve(-g_free);
            if (d_free.dot(g_free) < 0.0) {
              descent = true;
              break;
            }
          }
          damping *= 10.0;
        }
        if (!descent) break;  // model hopeless; outer loop will adjust

        Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
        for (int j = 0; j < nf; ++j) d[free_idx[static_cast<std::size_t>(j)]] = d_free[j];

        double alpha = 1.0;
        bool accepted = false;
        Eigen::VectorXd z_trial;
        double f_t = 0.0, phi_t = 0.0;
        Eigen::VectorXd c_t, g_t;
        for (int ls = 0; ls < 30; ++ls) {
          z_trial = project(z + alpha * d, p.var_lo, p.var_hi);
          const double decrease = grad.dot(z_trial - z);
          if (decrease >= 0.0) {
            alpha *= 0.5;
            continue;
          }
          bool trial_ok = true;
          try {
            ws.values(z_trial, f_t, c_t, g_t);
            phi_t = augmented_lagrangian(f_t, c_t, g_t, lambda, mu, rho);
            if (!std::isfinite(phi_t)) trial_ok = false;
          } catch (const EvalFault&) {
            trial_ok = false;
          }
          if (trial_ok && phi_t <= phi + 1e-4 * decrease) {
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!accepted) {
          damping *= 100.0;
          if (damping > 1e10) break;  // stalled even with heavy damping
          continue;
        }
        if (alpha >= 0.5) damping = std::max(damping * 0.3, 1e-8);

        Evaluation e_next;
        ws.with_jacobians(z_trial, e_next);
        if (!std::isfinite(e_next.f) || !e_next.c.allFinite() || !e_next.g.allFinite())
          throw EvalFault("iterate");
        z = z_trial;
        e = e_next;
        grad = augmented_gradient(e, lambda, mu, rho);
        phi = augmented_lagrangian(e.f, e.c, e.g, lambda, mu, rho);
      }
      total_inner += it;

      const double v_eq = eq_violation(e.c);
      const double v_in = ineq_violation(e.g);
      exit_pg = pg;

      static const bool trace = std::getenv("CHEBPLAN_SOLVER_TRACE") != nullptr;
      if (trace)
        std::fprintf(stderr,
                     "[solver] outer=%d inner=%d rho=%.3g veq=%.3g vin=%.3g pg=%.3g "
                     "omega=%.3g eta=%.3g f=%.6g\n",
                     outer, it, rho, v_eq, v_in, pg, omega, eta, e.f);

      if (std::max(v_eq, v_in) <= std::max(eta, eta_floor)) {
        // Multiplier update; the AL gradient at the old multipliers equals
        // the Lagrangian gradient at the new ones, so pg doubles as the
        // stationarity residual.
        lambda = (lambda + rho * e.c).cwiseMax(-kMultiplierCap).cwiseMin(kMultiplierCap);
        mu = (mu + rho * e.g).cwiseMax(0.0).cwiseMin(kMultiplierCap);
        if (v_eq <= sp.tol_eq && v_in <= sp.tol_ineq && pg <= sp.tol_stationarity) {
          record_best(z, e, pg, /*force=*/true);
          best.status = SolveStatus::kConverged;
          break;
        }
        record_best(z, e, pg);
        eta = std::max(eta * 0.2, eta_floor);
        omega = std::max(omega * 0.2, sp.tol_stationarity);
      } else {
        record_best(z, e, pg);
        rho = std::min(rho * sp.penalty_growth, kPenaltyCap);
      }
    }
  } catch (const EvalFault&) {
    fault = true;
  }

  if (fault) {
    best.status = SolveStatus::kInfeasibleDetected;
    if (best.node_states.empty())
      unpack_decision(p.layout, z, best.node_states, best.node_controls, best.delta_t);
  } else if (best.node_states.empty()) {
    record_best(z, e, exit_pg);
  }

  // Signed Lagrangian gradient at active variable bounds; zero elsewhere.
  best.bound_duals = Eigen::VectorXd::Zero(dim);
  if (!fault) {
    Eigen::VectorXd grad_l = e.grad_f;
    if (m_eq > 0) grad_l += e.jc.transpose() * lambda;
    if (m_in > 0) grad_l += e.jg.transpose() * mu;
    for (int i = 0; i < dim; ++i) {
      const double eps = 1e-8 * std::max(1.0, std::abs(z[i]));
      if (z[i] <= p.var_lo[i] + eps || z[i] >= p.var_hi[i] - eps) best.bound_duals[i] = grad_l[i];
    }
  }

  best.iterations = total_inner;
  best.solve_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return best;
}

}  // namespace chebplan
