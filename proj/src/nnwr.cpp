#include "fwr/nnwr.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "fwr/subdomain_solver.hpp"

namespace fwr {
namespace {

/// Runs task(i) for i < count; each task writes only its own slot.
void for_each_subdomain(std::size_t count, Schedule schedule, const std::function<void(std::size_t)>& task) {
  if (schedule == Schedule::Sequential || count < 2) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    pool.emplace_back([&, i] {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double optimal_theta_nnwr(double kappa_left, double kappa_right) {
  if (!(kappa_left > 0.0 && kappa_right > 0.0))
    throw std::invalid_argument("optimal_theta_nnwr: diffusion coefficients must be positive");
  return 1.0 / (2.0 + std::sqrt(kappa_left / kappa_right) + std::sqrt(kappa_right / kappa_left));
}

NnwrResult run_nnwr_1d(const NnwrConfig& cfg) {
  const Partition1D& p = cfg.partition;
  if (p.count() < 2) throw std::invalid_argument("NNWR needs at least two subdomains");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("NNWR: tolerance must be positive");
  const std::size_t subs = p.count();
  const std::size_t faces = subs - 1;

  std::vector<double> theta(faces);
  for (std::size_t i = 0; i < faces; ++i) {
    if (cfg.theta.empty()) theta[i] = optimal_theta_nnwr(p[i].kappa(), p[i + 1].kappa());
    else if (cfg.theta.size() == 1) theta[i] = cfg.theta[0];
    else if (cfg.theta.size() == faces) theta[i] = cfg.theta[i];
    else throw std::invalid_argument("NNWR: expected one theta per interface");
    if (!(theta[i] > 0.0 && theta[i] <= 1.0)) throw std::invalid_argument("NNWR: theta must lie in (0,1]");
  }

  const auto start = std::chrono::steady_clock::now();
  const CaputoWeights weights = build_weights(cfg.time);
  const std::size_t steps = weights.steps();
  const bool forced = cfg.mode == RunMode::Forced;
  const SourceTerm source = forced ? cfg.source : SourceTerm{};
  const InitialProfile initial = forced ? cfg.initial : InitialProfile{};

  std::vector<std::vector<double>> h(faces);
  for (std::size_t i = 0; i < faces; ++i) {
    if (cfg.initial_guess.empty()) h[i].assign(steps, forced ? 0.0 : 1.0);
    else if (cfg.initial_guess.size() == 1) h[i] = cfg.initial_guess[0];
    else if (cfg.initial_guess.size() == faces) h[i] = cfg.initial_guess[i];
    else throw std::invalid_argument("NNWR: expected one initial guess per interface");
    if (h[i].size() != steps) throw std::invalid_argument("NNWR: initial guess length does not match the time mesh");
  }

  NnwrResult out;
  if (forced) {
    const auto mono = solve_monolithic(p, weights, source, {}, {}, initial);
    for (std::size_t i = 0; i < faces; ++i) out.reference.push_back(end_trace(mono[i], Side::Right));
  }
  auto error_of = [&](std::size_t i) {
    return forced ? sup_distance(h[i], out.reference[i]) : sup_norm(h[i]);
  };

  IterationReport& rep = out.report;
  rep.theta = theta;
  for (std::size_t i = 0; i < faces; ++i) rep.initial_error.push_back(error_of(i));
  if (cfg.keep_history) out.iterates.push_back(h);

  std::vector<SpaceTimeField> u(subs), psi(subs);
  std::vector<std::vector<double>> mismatch(faces);
  for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
    for_each_subdomain(subs, cfg.schedule, [&](std::size_t i) {
      const EndCondition l = i == 0 ? EndCondition::homogeneous() : EndCondition::dirichlet(h[i - 1]);
      const EndCondition r = i + 1 == subs ? EndCondition::homogeneous() : EndCondition::dirichlet(h[i]);
      u[i] = solve_dirichlet_waveform(p[i], weights, l, r, source, initial);
    });
    std::vector<double> mismatch_sup(faces);
    for (std::size_t i = 0; i < faces; ++i) {
      const auto a = flux_trace(u[i], Side::Right, p[i]);
      const auto b = flux_trace(u[i + 1], Side::Left, p[i + 1]);
      mismatch[i].resize(steps);
      for (std::size_t n = 0; n < steps; ++n) mismatch[i][n] = a[n] + b[n];
      mismatch_sup[i] = sup_norm(mismatch[i]);
    }
    // Correction solves: flux data on interfaces, homogeneous Dirichlet on
    // the physical boundary.
    for_each_subdomain(subs, cfg.schedule, [&](std::size_t i) {
      const EndCondition l = i == 0 ? EndCondition::homogeneous() : EndCondition::neumann(mismatch[i - 1]);
      const EndCondition r = i + 1 == subs ? EndCondition::homogeneous() : EndCondition::neumann(mismatch[i]);
      psi[i] = solve_waveform(p[i], weights, l, r);
    });

    std::vector<double> upd(faces), err(faces);
    for (std::size_t i = 0; i < faces; ++i) {
      const auto a = end_trace(psi[i], Side::Right);
      const auto b = end_trace(psi[i + 1], Side::Left);
      double worst = 0.0;
      for (std::size_t n = 0; n < steps; ++n) {
        const double delta = theta[i] * (a[n] + b[n]);
        h[i][n] -= delta;
        worst = std::max(worst, std::abs(delta));
      }
      upd[i] = worst;
      err[i] = error_of(i);
    }
    rep.update.push_back(upd);
    rep.error.push_back(err);
    out.mismatch.push_back(mismatch_sup);
    rep.iterations = k;
    if (cfg.keep_history) out.iterates.push_back(h);

    const double measure = forced ? rep.max_update(k) : rep.max_error(k);
    if (measure <= cfg.tolerance) {
      rep.converged = true;
      break;
    }
  }
  rep.wall_seconds = elapsed(start);
  return out;
}

Nnwr2dResult run_nnwr_2d(const Nnwr2dConfig& cfg) {
  if (!(cfg.split > cfg.x.lo && cfg.split < cfg.x.hi))
    throw std::invalid_argument("2D NNWR: split must lie inside the x-interval");
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) throw std::invalid_argument("2D NNWR: theta must lie in (0,1]");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("2D NNWR: tolerance must be positive");

  const auto start = std::chrono::steady_clock::now();
  const CaputoWeights weights = build_weights(cfg.time);
  const std::size_t steps = weights.steps();
  const bool forced = cfg.mode == RunMode::Forced;
  const SourceTerm2D source = forced ? cfg.source : SourceTerm2D{};
  const InitialProfile2D initial = forced ? cfg.initial : InitialProfile2D{};

  const Subdomain2D left({cfg.x.lo, cfg.split}, cfg.y, cfg.kappa, cfg.dx, cfg.dy);
  const Subdomain2D right({cfg.split, cfg.x.hi}, cfg.y, cfg.kappa, cfg.dx, cfg.dy);
  const std::size_t ny = left.ny();

  // Factorisations are reused across all iterations.
  std::vector<StripSolver> dirichlet;
  dirichlet.emplace_back(left, weights, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet);
  dirichlet.emplace_back(right, weights, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet);
  std::vector<StripSolver> neumann;
  neumann.emplace_back(left, weights, BoundaryKind::Dirichlet, BoundaryKind::Neumann);
  neumann.emplace_back(right, weights, BoundaryKind::Neumann, BoundaryKind::Dirichlet);

  LineTrace h = cfg.initial_guess;
  if (h.empty()) {
    h = LineTrace(steps, ny);
    if (!forced)
      for (std::size_t n = 1; n <= steps; ++n)
        for (std::size_t j = 1; j + 1 < ny; ++j) h.at(n, j) = 1.0;
  }
  if (h.ny != ny || h.values.size() != steps * ny)
    throw std::invalid_argument("2D NNWR: initial guess does not match the grid and time mesh");

  Nnwr2dResult out;
  IterationReport& rep = out.report;
  rep.theta = {cfg.theta};
  rep.initial_error = {forced ? 0.0 : sup_norm(h.values)};
  if (cfg.keep_history) out.iterates.push_back(h);

  std::vector<SpaceTimeField> u(2), psi(2);
  for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
    const LineCondition face{BoundaryKind::Dirichlet, h};
    for_each_subdomain(2, cfg.schedule, [&](std::size_t i) {
      u[i] = i == 0 ? dirichlet[0].solve({}, face, source, initial) : dirichlet[1].solve(face, {}, source, initial);
    });
    const LineTrace a = flux_line_trace(u[0], left, Side::Right);
    const LineTrace b = flux_line_trace(u[1], right, Side::Left);
    LineTrace m(steps, ny);
    for (std::size_t q = 0; q < m.values.size(); ++q) m.values[q] = a.values[q] + b.values[q];
    out.mismatch.push_back(sup_norm(m.values));
    const LineCondition flux{BoundaryKind::Neumann, m};
    for_each_subdomain(2, cfg.schedule, [&](std::size_t i) {
      psi[i] = i == 0 ? neumann[0].solve({}, flux) : neumann[1].solve(flux, {});
    });
    const LineTrace pa = end_line_trace(psi[0], left, Side::Right);
    const LineTrace pb = end_line_trace(psi[1], right, Side::Left);
    double worst = 0.0;
    for (std::size_t n = 1; n <= steps; ++n)
      for (std::size_t j = 1; j + 1 < ny; ++j) {
        const double delta = cfg.theta * (pa.at(n, j) + pb.at(n, j));
        h.at(n, j) -= delta;
        worst = std::max(worst, std::abs(delta));
      }
    rep.update.push_back({worst});
    rep.error.push_back({forced ? worst : sup_norm(h.values)});
    rep.iterations = k;
    if (cfg.keep_history) out.iterates.push_back(h);
    if (rep.error.back()[0] <= cfg.tolerance) {
      rep.converged = true;
      break;
    }
  }
  rep.wall_seconds = elapsed(start);
  return out;
}

}  // namespace fwr
