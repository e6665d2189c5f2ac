#include "skyrmion/minimizer.hpp"

#include "skyrmion/errors.hpp"
#include "skyrmion/laplace.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <numbers>

namespace skyrmion {

namespace {

constexpr double eight_pi = 8.0 * std::numbers::pi;

// ½ A⁻¹ per component, A the masked 5-point Laplacian: the inverse of the
// leading (exchange) part of the Hessian.
class ExchangePreconditioner {
public:
  explicit ExchangePreconditioner(const Grid &g) : g_(g), poisson_(g.nx(), g.ny(), flat_mask(g)) {
    in_.resize(poisson_.size());
    out_.resize(poisson_.size());
  }

  void apply(const VectorField &v, VectorField &out) {
    for (std::size_t c = 0; c < 3; ++c) {
      for (int j = 0; j < g_.ny(); ++j) {
        for (int i = 0; i < g_.nx(); ++i) {
          in_[flat(i, j)] = v.c[c][g_.index(i, j)];
        }
      }
      poisson_.precondition(in_, out_);
      for (int j = 0; j < g_.ny(); ++j) {
        for (int i = 0; i < g_.nx(); ++i) {
          const std::size_t k = g_.index(i, j);
          out.c[c][k] = g_.interior(k) ? 0.5 * out_[flat(i, j)] : 0.0;
        }
      }
    }
  }

private:
  static std::vector<std::uint8_t> flat_mask(const Grid &g) {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(g.nx()) * static_cast<std::size_t>(g.ny()));
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        m[static_cast<std::size_t>(j) * static_cast<std::size_t>(g.nx()) + static_cast<std::size_t>(i)] =
            g.interior(i, j) ? 1 : 0;
      }
    }
    return m;
  }
  std::size_t flat(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(g_.nx()) + static_cast<std::size_t>(i);
  }

  const Grid &g_;
  MaskedPoisson poisson_;
  std::vector<double> in_;
  std::vector<double> out_;
};

void axpy(double a, const VectorField &x, VectorField &y) {
  for (std::size_t c = 0; c < 3; ++c) {
    const auto &xs = x.c[c];
    auto &ys = y.c[c];
    for (std::size_t k = 0; k < ys.size(); ++k) {
      ys[k] += a * xs[k];
    }
  }
}

void scale(double a, VectorField &y) {
  for (auto &plane : y.c) {
    for (double &v : plane) {
      v *= a;
    }
  }
}

VectorField difference(const SpinField &a, const SpinField &b) {
  VectorField out(a.grid_ptr());
  for (std::size_t c = 0; c < 3; ++c) {
    const auto x = a.component(static_cast<int>(c));
    const auto y = b.component(static_cast<int>(c));
    for (std::size_t k = 0; k < out.c[c].size(); ++k) {
      out.c[c][k] = x[k] - y[k];
    }
  }
  return out;
}

VectorField difference(const VectorField &a, const VectorField &b) {
  VectorField out = a;
  axpy(-1.0, b, out);
  return out;
}

struct Pair {
  VectorField s;
  VectorField y;
  double rho;
  double yMy;
};

} // namespace

void SolverOptions::validate() const {
  if (max_iterations < 0) {
    throw InvalidArgument("max_iterations must be nonnegative");
  }
  if (grad_tolerance && !(*grad_tolerance > 0.0)) {
    throw InvalidArgument("grad_tolerance must be positive");
  }
  if (!(initial_step > 0.0)) {
    throw InvalidArgument("initial_step must be positive");
  }
  if (degree_check_every <= 0) {
    throw InvalidArgument("degree_check_every must be positive");
  }
  if (memory < 1) {
    throw InvalidArgument("memory must be at least 1");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw InvalidArgument("armijo_c must lie in (0, 1)");
  }
  if (max_backtracks < 1) {
    throw InvalidArgument("max_backtracks must be positive");
  }
}

double SolverOptions::tolerance_for(double h) const {
  return grad_tolerance ? *grad_tolerance : 1e-6 * eight_pi / h;
}

double gradient_density_norm(const VectorField &tangent_gradient) {
  const double h = tangent_gradient.grid->h();
  return tangent_gradient.max_norm() / (h * h);
}

InitialGuess initial_guess(std::shared_ptr<const Grid> grid, double kappa, double lambda,
                           const std::optional<SkyrmionPrediction> &prediction, BoundaryMode mode) {
  if (!(kappa > 0.0)) {
    throw InvalidArgument("kappa must be positive");
  }
  if (lambda < 0.0) {
    throw InvalidArgument("lambda must be nonnegative");
  }
  const DomainSpec &domain = grid->domain();
  InitialGuess out{SpinField(grid, mode), {}, 0.0, 0.0};
  if (prediction) {
    out.center = prediction->center;
    out.rho = kappa * prediction->r0;
  } else {
    const double r = domain.inradius();
    out.center = domain.incenter();
    out.rho = kappa * r * r / (4.0 + 2.0 * lambda * r * r);
  }
  const double dist = domain.distance_to_boundary(out.center);
  out.L = std::min(dist / (2.0 * out.rho), 1.0 / (kappa * dist));
  if (!(out.L > 1.0)) {
    throw GeometryTooTight("no truncated profile with L > 1 fits: rho = " + std::to_string(out.rho) +
                           ", distance to boundary = " + std::to_string(dist));
  }
  const double L = out.L;
  const double rho = out.rho;
  const Vec2 a = out.center;
  out.field = SpinField::sample(grid, [&](Vec2 x) { return evaluate_truncated_bp(L, rho, a, x); }, mode);
  return out;
}

MinimizeResult minimize(const SpinField &field0, double kappa, double lambda, const SolverOptions &options) {
  options.validate();
  const Grid &g = field0.grid();
  const double tol = options.tolerance_for(g.h());

  MinimizeResult res{field0, {}, 0, 0, false, StopReason::max_iterations, {}, 0.0, 0.0};
  SpinField &x = res.field;

  const DegreeReport d0 = degree(x);
  if (d0.rounded != 1) {
    throw InvalidArgument("minimize expects a degree +1 start, got degree " + std::to_string(d0.value));
  }
  res.degree_history.push_back(d0.value);

  std::ofstream telemetry;
  if (!options.telemetry.empty()) {
    telemetry.open(options.telemetry);
    if (!telemetry) {
      throw Error("cannot open telemetry file " + options.telemetry.string());
    }
    telemetry << "iteration,energy,grad_norm,degree,step\n" << std::setprecision(17);
  }

  std::optional<ExchangePreconditioner> M;
  if (options.precondition) {
    M.emplace(g);
  }

  VectorField grad(x.grid_ptr());
  EnergyBreakdown E = energy_and_gradient(x, kappa, lambda, grad);
  project_to_tangent(x, grad);
  double gn = gradient_density_norm(grad);
  double last_degree = d0.value;

  std::deque<Pair> history;
  VectorField d(x.grid_ptr());
  VectorField work(x.grid_ptr());
  double alpha_prev = options.initial_step;

  auto preconditioned = [&](const VectorField &v, VectorField &out) {
    if (M) {
      M->apply(v, out);
    } else {
      out = v;
    }
  };

  auto write_row = [&](long it, double step) {
    if (telemetry) {
      telemetry << it << ',' << E.total << ',' << gn << ',' << last_degree << ',' << step << '\n';
    }
  };
  write_row(0, 0.0);

  auto compute_direction = [&]() {
    for (;;) {
      if (options.direction == Direction::lbfgs && !history.empty()) {
        VectorField q = grad;
        std::vector<double> a(history.size());
        for (std::size_t n = history.size(); n-- > 0;) {
          a[n] = history[n].rho * history[n].s.dot(q);
          axpy(-a[n], history[n].y, q);
        }
        preconditioned(q, d);
        const Pair &last = history.back();
        if (last.yMy > 0.0) {
          scale(1.0 / (last.rho * last.yMy), d);
        }
        for (std::size_t n = 0; n < history.size(); ++n) {
          const double b = history[n].rho * history[n].y.dot(d);
          axpy(a[n] - b, history[n].s, d);
        }
      } else {
        preconditioned(grad, d);
      }
      scale(-1.0, d);
      project_to_tangent(x, d);
      const double slope = grad.dot(d);
      if (slope < 0.0 || history.empty()) {
        return slope;
      }
      history.clear();
    }
  };

  SpinField trial = x;
  VectorField trial_grad(x.grid_ptr());
  EnergyBreakdown Et;
  auto line_search = [&](double alpha, double slope) -> std::optional<double> {
    for (int bt = 0; bt < options.max_backtracks; ++bt) {
      trial = x;
      trial.retract(d, alpha);
      Et = energy_and_gradient(trial, kappa, lambda, trial_grad);
      if (options.step_rule == StepRule::fixed || Et.total <= E.total + options.armijo_c * alpha * slope) {
        return alpha;
      }
      alpha *= 0.5;
    }
    return std::nullopt;
  };

  long it = 0;
  for (; it < options.max_iterations; ++it) {
    if (gn <= tol) {
      res.converged = true;
      res.reason = StopReason::converged;
      break;
    }

    double slope = compute_direction();
    const bool quasi_newton = options.direction == Direction::lbfgs && !history.empty();
    double alpha0 = options.step_rule == StepRule::fixed ? options.initial_step
                    : quasi_newton                      ? 1.0
                    : options.direction == Direction::lbfgs
                        ? std::min(options.initial_step, 2.0 * alpha_prev)
                        : 2.0 * alpha_prev;
    std::optional<double> alpha = line_search(alpha0, slope);
    if (!alpha && quasi_newton) {
      history.clear();
      slope = compute_direction();
      alpha = line_search(std::min(options.initial_step, 2.0 * alpha_prev), slope);
    }
    if (!alpha) {
      // At roundoff level the energy no longer resolves the predicted decrease.
      const double resolvable = 1e3 * std::numeric_limits<double>::epsilon() * std::abs(E.total);
      if (std::abs(slope) * options.initial_step <= resolvable) {
        res.reason = StopReason::stagnated;
        break;
      }
      throw NoDecrease("line search failed after " + std::to_string(options.max_backtracks) +
                       " backtracking steps at iteration " + std::to_string(it));
    }

    project_to_tangent(trial, trial_grad);
    if (options.direction == Direction::lbfgs) {
      Pair p{difference(trial, x), difference(trial_grad, grad), 0.0, 0.0};
      const double sy = p.s.dot(p.y);
      if (sy > 1e-300) {
        p.rho = 1.0 / sy;
        preconditioned(p.y, work);
        p.yMy = p.y.dot(work);
        history.push_back(std::move(p));
        if (static_cast<int>(history.size()) > options.memory) {
          history.pop_front();
        }
      }
    }
    x = std::move(trial);
    grad = std::move(trial_grad);
    E = Et;
    gn = gradient_density_norm(grad);
    alpha_prev = *alpha;
    ++res.accepted_steps;

    if ((it + 1) % options.degree_check_every == 0) {
      const DegreeReport dr = degree(x);
      res.degree_history.push_back(dr.value);
      if (dr.rounded != d0.rounded) {
        throw DegreeJump("rounded degree changed from " + std::to_string(d0.rounded) + " to " +
                             std::to_string(dr.rounded) + " at iteration " + std::to_string(it + 1),
                         it + 1, last_degree, dr.value);
      }
      last_degree = dr.value;
    }
    write_row(it + 1, *alpha);
  }
  res.iterations = it;

  const DegreeReport dr = degree(x);
  res.degree_history.push_back(dr.value);
  if (dr.rounded != d0.rounded) {
    throw DegreeJump("rounded degree changed from " + std::to_string(d0.rounded) + " to " +
                         std::to_string(dr.rounded) + " at iteration " + std::to_string(it),
                     it, last_degree, dr.value);
  }
  res.breakdown = E;
  res.grad_norm = gn;
  res.gap = kappa > 0.0 ? (E.total - eight_pi) / (kappa * kappa) : std::numeric_limits<double>::quiet_NaN();
  return res;
}

std::vector<SweepPoint> kappa_sweep(std::shared_ptr<const Grid> grid, const std::vector<double> &kappas,
                                    double lambda, const SolverOptions &options,
                                    const std::optional<SkyrmionPrediction> &prediction) {
  if (kappas.empty()) {
    throw InvalidArgument("kappa sweep needs at least one kappa");
  }
  for (std::size_t k = 0; k < kappas.size(); ++k) {
    if (!(kappas[k] > 0.0)) {
      throw InvalidArgument("kappas must be positive");
    }
    if (k > 0 && !(kappas[k] < kappas[k - 1])) {
      throw InvalidArgument("kappas must be sorted in descending order");
    }
  }
  std::vector<SweepPoint> out;
  for (std::size_t k = 0; k < kappas.size(); ++k) {
    const double kappa = kappas[k];
    SpinField start(grid);
    if (k == 0) {
      start = initial_guess(grid, kappa, lambda, prediction).field;
    } else {
      const SweepPoint &prev = out.back();
      const Vec2 a = prev.fit.params.center;
      const double ratio = prev.kappa / kappa;
      start = resample(prev.result.field, grid, [a, ratio](Vec2 x) { return a + (x - a) * ratio; });
    }
    MinimizeResult r = minimize(start, kappa, lambda, options);
    FitReport fit = fit_bp(r.field);
    out.push_back(SweepPoint{kappa, std::move(r), fit});
  }
  return out;
}

} // namespace skyrmion
