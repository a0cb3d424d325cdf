#include "fwr/dnwr.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fwr/subdomain_solver.hpp"

namespace fwr {

double optimal_theta_dnwr(double kappa1, double kappa2) {
  if (!(kappa1 > 0.0 && kappa2 > 0.0))
    throw std::invalid_argument("optimal_theta_dnwr: diffusion coefficients must be positive");
  return 1.0 / (1.0 + std::sqrt(kappa1 / kappa2));
}

double alternative_theta_dnwr(double kappa1, double kappa2) {
  if (!(kappa1 > 0.0 && kappa2 > 0.0))
    throw std::invalid_argument("alternative_theta_dnwr: diffusion coefficients must be positive");
  return std::sqrt(kappa1) / (std::sqrt(kappa1) + std::sqrt(kappa2));
}

DnwrResult run_dnwr(const DnwrConfig& cfg) {
  if (cfg.partition.count() != 2) throw std::invalid_argument("DNWR needs exactly two subdomains");
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) throw std::invalid_argument("DNWR: theta must lie in (0,1]");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("DNWR: tolerance must be positive");

  const auto start = std::chrono::steady_clock::now();
  const CaputoWeights weights = build_weights(cfg.time);
  const std::size_t steps = weights.steps();
  const bool forced = cfg.mode == RunMode::Forced;
  const Subdomain1D& left = cfg.partition[0];
  const Subdomain1D& right = cfg.partition[1];
  const SourceTerm source = forced ? cfg.source : SourceTerm{};
  const InitialProfile initial = forced ? cfg.initial : InitialProfile{};

  std::vector<double> h = cfg.initial_guess;
  if (h.empty()) h.assign(steps, forced ? 0.0 : 1.0);
  if (h.size() != steps) throw std::invalid_argument("DNWR: initial guess length does not match the time mesh");

  DnwrResult out;
  if (forced) out.reference = end_trace(solve_monolithic(cfg.partition, weights, source, {}, {}, initial)[0], Side::Right);
  auto error_of = [&](const std::vector<double>& trace) {
    return forced ? sup_distance(trace, out.reference) : sup_norm(trace);
  };

  IterationReport& rep = out.report;
  rep.theta = {cfg.theta};
  rep.initial_error = {error_of(h)};
  if (cfg.keep_history) out.iterates.push_back(h);

  for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
    const auto u1 = solve_dirichlet_waveform(left, weights, {}, EndCondition::dirichlet(h), source, initial);
    std::vector<double> flux = flux_trace(u1, Side::Right, left);
    for (double& f : flux) f = -f;
    const auto u2 = solve_neumann_waveform(right, weights, EndCondition::neumann(std::move(flux)), {}, source, initial);
    const std::vector<double> trace = end_trace(u2, Side::Left);

    std::vector<double> next(steps);
    for (std::size_t n = 0; n < steps; ++n) next[n] = cfg.theta * trace[n] + (1.0 - cfg.theta) * h[n];

    rep.update.push_back({sup_distance(next, h)});
    rep.error.push_back({error_of(next)});
    rep.iterations = k;
    if (cfg.keep_history) {
      out.iterates.push_back(next);
      out.neumann_traces.push_back(trace);
    }
    if (cfg.keep_fields) out.fields = {u1, u2};
    h = std::move(next);

    const double measure = forced ? rep.update.back()[0] : rep.error.back()[0];
    if (measure <= cfg.tolerance) {
      rep.converged = true;
      break;
    }
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace fwr
