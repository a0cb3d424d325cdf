#include "fwr/subdomain_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tridiagonal.hpp"

namespace fwr {
namespace {

/// Chain of subdomains solved as one system; a single subdomain is a chain of
/// length one. Interior interface nodes carry the flux-balance row.
class ChainStepper {
 public:
  ChainStepper(std::span<const Subdomain1D> segments, const CaputoWeights& weights,
               const EndCondition& left, const EndCondition& right, const SourceTerm& source)
      : segs_(segments), w_(weights), left_(left), right_(right), source_(source) {
    const std::size_t levels = weights.steps();
    for (const EndCondition* e : {&left, &right})
      if (!e->values.empty() && e->values.size() != levels)
        throw std::invalid_argument("end condition length does not match the time mesh");
    offsets_.push_back(0);
    for (const auto& s : segs_) offsets_.push_back(offsets_.back() + s.cells());
    nodes_ = offsets_.back() + 1;
  }

  std::size_t nodes() const { return nodes_; }

  double x(std::size_t g) const {
    const std::size_t s = segment_of(g);
    return segs_[s].node(g - offsets_[s]);
  }

  detail::TridiagonalRows assemble(std::size_t n, const SpaceTimeField& u) const {
    detail::TridiagonalRows m(nodes_);
    const double b = w_.diagonal(n);
    const double omega = w_.implicit_weight();
    const auto row = w_.row(n);
    const auto prev = u.row(n - 1);

    for (std::size_t s = 0; s < segs_.size(); ++s) {
      const Subdomain1D& seg = segs_[s];
      const double c = seg.kappa() / (seg.dx() * seg.dx());
      for (std::size_t g = offsets_[s] + 1; g < offsets_[s + 1]; ++g) {
        m.lower[g] = -omega * c;
        m.diag[g] = b + 2.0 * omega * c;
        m.upper[g] = -omega * c;
        double history = 0.0;
        for (std::size_t j = 1; j < n; ++j) history += row[j - 1] * (u(j, g) - u(j - 1, g));
        double rhs = b * prev[g] - history;
        if (omega < 1.0) rhs += (1.0 - omega) * c * (prev[g - 1] - 2.0 * prev[g] + prev[g + 1]);
        if (source_) rhs += w_.level_average(n, [&](double t) { return source_(x(g), t); });
        m.rhs[g] = rhs;
      }
    }
    // Flux balance at interior interfaces: outward fluxes of both sides sum to 0.
    for (std::size_t s = 0; s + 1 < segs_.size(); ++s) {
      const std::size_t g = offsets_[s + 1];
      const double cl = segs_[s].kappa() / (2.0 * segs_[s].dx());
      const double cr = segs_[s + 1].kappa() / (2.0 * segs_[s + 1].dx());
      m.lower2[g] = cl;
      m.lower[g] = -4.0 * cl;
      m.diag[g] = 3.0 * (cl + cr);
      m.upper[g] = -4.0 * cr;
      m.upper2[g] = cr;
      m.rhs[g] = 0.0;
    }
    end_row(m, n, Side::Left);
    end_row(m, n, Side::Right);
    return m;
  }

  SpaceTimeField run(const InitialProfile& initial) const {
    SpaceTimeField u(w_.steps() + 1, nodes_);
    if (initial)
      for (std::size_t g = 0; g < nodes_; ++g) u(0, g) = initial(x(g));
    for (std::size_t n = 1; n <= w_.steps(); ++n) {
      auto m = assemble(n, u);
      const auto sol = detail::solve(m);
      std::copy(sol.begin(), sol.end(), u.row(n).begin());
    }
    return u;
  }

  std::vector<SpaceTimeField> split(const SpaceTimeField& u) const {
    std::vector<SpaceTimeField> out;
    for (std::size_t s = 0; s < segs_.size(); ++s) {
      SpaceTimeField f(u.levels(), segs_[s].size());
      for (std::size_t n = 0; n < u.levels(); ++n)
        for (std::size_t i = 0; i < f.nodes(); ++i) f(n, i) = u(n, offsets_[s] + i);
      out.push_back(std::move(f));
    }
    return out;
  }

 private:
  std::size_t segment_of(std::size_t g) const {
    for (std::size_t s = 0; s < segs_.size(); ++s)
      if (g <= offsets_[s + 1]) return s;
    return segs_.size() - 1;
  }

  void end_row(detail::TridiagonalRows& m, std::size_t n, Side side) const {
    const EndCondition& e = side == Side::Left ? left_ : right_;
    const double value = e.values.empty() ? 0.0 : e.values[n - 1];
    const std::size_t g = side == Side::Left ? 0 : nodes_ - 1;
    if (e.kind == BoundaryKind::Dirichlet) {
      m.diag[g] = 1.0;
      m.rhs[g] = value;
      return;
    }
    const Subdomain1D& seg = side == Side::Left ? segs_.front() : segs_.back();
    const double c = seg.kappa() / (2.0 * seg.dx());
    m.diag[g] = 3.0 * c;
    if (side == Side::Left) {
      m.upper[g] = -4.0 * c;
      m.upper2[g] = c;
    } else {
      m.lower[g] = -4.0 * c;
      m.lower2[g] = c;
    }
    m.rhs[g] = value;
  }

  std::span<const Subdomain1D> segs_;
  const CaputoWeights& w_;
  const EndCondition& left_;
  const EndCondition& right_;
  const SourceTerm& source_;
  std::vector<std::size_t> offsets_;
  std::size_t nodes_ = 0;
};

}  // namespace

SpaceTimeField solve_waveform(const Subdomain1D& sub, const CaputoWeights& weights,
                              const EndCondition& left, const EndCondition& right,
                              const SourceTerm& source, const InitialProfile& initial) {
  ChainStepper stepper(std::span<const Subdomain1D>(&sub, 1), weights, left, right, source);
  return stepper.run(initial);
}

SpaceTimeField solve_dirichlet_waveform(const Subdomain1D& sub, const CaputoWeights& weights,
                                        const EndCondition& left, const EndCondition& right,
                                        const SourceTerm& source, const InitialProfile& initial) {
  if (left.kind != BoundaryKind::Dirichlet || right.kind != BoundaryKind::Dirichlet)
    throw std::invalid_argument("Dirichlet solve: both ends need Dirichlet data");
  return solve_waveform(sub, weights, left, right, source, initial);
}

SpaceTimeField solve_neumann_waveform(const Subdomain1D& sub, const CaputoWeights& weights,
                                      const EndCondition& left, const EndCondition& right,
                                      const SourceTerm& source, const InitialProfile& initial) {
  if (left.kind != BoundaryKind::Neumann && right.kind != BoundaryKind::Neumann)
    throw std::invalid_argument("Neumann solve: at least one end needs flux data");
  return solve_waveform(sub, weights, left, right, source, initial);
}

std::vector<SpaceTimeField> solve_monolithic(const Partition1D& partition,
                                             const CaputoWeights& weights,
                                             const SourceTerm& source, const EndCondition& left,
                                             const EndCondition& right,
                                             const InitialProfile& initial) {
  if (left.kind != BoundaryKind::Dirichlet || right.kind != BoundaryKind::Dirichlet)
    throw std::invalid_argument("monolithic solve: physical boundaries carry Dirichlet data");
  ChainStepper stepper(partition.subdomains(), weights, left, right, source);
  return stepper.split(stepper.run(initial));
}

std::vector<double> end_trace(const SpaceTimeField& field, Side side) {
  std::vector<double> v(field.levels() - 1);
  const std::size_t i = side == Side::Left ? 0 : field.nodes() - 1;
  for (std::size_t n = 1; n < field.levels(); ++n) v[n - 1] = field(n, i);
  return v;
}

std::vector<double> flux_trace(const SpaceTimeField& field, Side side, const Subdomain1D& sub) {
  std::vector<double> v(field.levels() - 1);
  for (std::size_t n = 1; n < field.levels(); ++n) v[n - 1] = interface_flux(field.row(n), side, sub);
  return v;
}

double waveform_residual(const Subdomain1D& sub, const CaputoWeights& weights,
                         const EndCondition& left, const EndCondition& right,
                         const SpaceTimeField& field, const SourceTerm& source) {
  ChainStepper stepper(std::span<const Subdomain1D>(&sub, 1), weights, left, right, source);
  double worst = 0.0;
  for (std::size_t n = 1; n < field.levels(); ++n) {
    const auto m = stepper.assemble(n, field);
    const auto u = field.row(n);
    for (std::size_t i = 0; i < m.size(); ++i) {
      double lhs = m.diag[i] * u[i];
      double scale = std::abs(lhs) + std::abs(m.rhs[i]);
      auto add = [&](double coeff, std::ptrdiff_t k) {
        if (coeff == 0.0) return;
        const double term = coeff * u[static_cast<std::size_t>(k)];
        lhs += term;
        scale += std::abs(term);
      };
      const auto ii = static_cast<std::ptrdiff_t>(i);
      add(m.lower[i], ii - 1);
      add(m.upper[i], ii + 1);
      add(m.lower2[i], ii - 2);
      add(m.upper2[i], ii + 2);
      if (scale > 0.0) worst = std::max(worst, std::abs(lhs - m.rhs[i]) / scale);
    }
  }
  return worst;
}

}  // namespace fwr
