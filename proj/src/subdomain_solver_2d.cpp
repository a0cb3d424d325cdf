#include "fwr/subdomain_solver_2d.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fwr/errors.hpp"

namespace fwr {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Lu = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

constexpr double kResidualTolerance = 1e-10;

bool on_y_boundary(const Subdomain2D& s, std::size_t j) { return j == 0 || j + 1 == s.ny(); }

}  // namespace

struct StripSolver::Factorisations {
  std::vector<SparseMatrix> matrices;  // one per distinct diagonal weight
  std::vector<std::unique_ptr<Lu>> lu;
  std::vector<std::size_t> level_slot;  // level n -> index into lu
};

StripSolver::~StripSolver() = default;
StripSolver::StripSolver(StripSolver&&) noexcept = default;
StripSolver& StripSolver::operator=(StripSolver&&) noexcept = default;

StripSolver::StripSolver(Subdomain2D sub, CaputoWeights weights, BoundaryKind left,
                         BoundaryKind right)
    : sub_(std::move(sub)), weights_(std::move(weights)), left_(left), right_(right),
      lu_(std::make_unique<Factorisations>()) {
  const std::size_t nx = sub_.nx();
  const std::size_t ny = sub_.ny();
  const double k = sub_.kappa();
  const double cx = k / (sub_.x_axis().dx() * sub_.x_axis().dx());
  const double cy = k / (sub_.y_axis().dx() * sub_.y_axis().dx());
  const double omega = weights_.implicit_weight();
  const double fx = k / (2.0 * sub_.x_axis().dx());
  const auto n_unknowns = static_cast<Eigen::Index>(sub_.size());

  std::vector<double> distinct;
  lu_->level_slot.assign(weights_.steps() + 1, 0);
  for (std::size_t n = 1; n <= weights_.steps(); ++n) {
    const double b = weights_.diagonal(n);
    std::size_t slot = 0;
    while (slot < distinct.size() && distinct[slot] != b) ++slot;
    lu_->level_slot[n] = slot;
    if (slot < distinct.size()) continue;
    distinct.push_back(b);

    std::vector<Eigen::Triplet<double>> t;
    t.reserve(5 * sub_.size());
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        const auto r = static_cast<int>(sub_.index(i, j));
        const bool left_end = i == 0;
        const bool right_end = i + 1 == nx;
        if (on_y_boundary(sub_, j) || (left_end && left_ == BoundaryKind::Dirichlet) ||
            (right_end && right_ == BoundaryKind::Dirichlet)) {
          t.emplace_back(r, r, 1.0);
        } else if (left_end) {
          t.emplace_back(r, r, 3.0 * fx);
          t.emplace_back(r, static_cast<int>(sub_.index(1, j)), -4.0 * fx);
          t.emplace_back(r, static_cast<int>(sub_.index(2, j)), fx);
        } else if (right_end) {
          t.emplace_back(r, r, 3.0 * fx);
          t.emplace_back(r, static_cast<int>(sub_.index(nx - 2, j)), -4.0 * fx);
          t.emplace_back(r, static_cast<int>(sub_.index(nx - 3, j)), fx);
        } else {
          t.emplace_back(r, r, b + 2.0 * omega * (cx + cy));
          t.emplace_back(r, static_cast<int>(sub_.index(i - 1, j)), -omega * cx);
          t.emplace_back(r, static_cast<int>(sub_.index(i + 1, j)), -omega * cx);
          t.emplace_back(r, static_cast<int>(sub_.index(i, j - 1)), -omega * cy);
          t.emplace_back(r, static_cast<int>(sub_.index(i, j + 1)), -omega * cy);
        }
      }
    }
    SparseMatrix a(n_unknowns, n_unknowns);
    a.setFromTriplets(t.begin(), t.end());
    a.makeCompressed();
    auto lu = std::make_unique<Lu>();
    lu->compute(a);
    if (lu->info() != Eigen::Success)
      throw NumericalError("strip solver: sparse LU factorisation failed");
    lu_->matrices.push_back(std::move(a));
    lu_->lu.push_back(std::move(lu));
  }
}

SpaceTimeField StripSolver::solve(const LineCondition& left, const LineCondition& right,
                                  const SourceTerm2D& source,
                                  const InitialProfile2D& initial) const {
  if (left.kind != left_ || right.kind != right_)
    throw std::invalid_argument("strip solver: boundary kinds differ from the factorised ones");
  const std::size_t nx = sub_.nx();
  const std::size_t ny = sub_.ny();
  const std::size_t steps = weights_.steps();
  for (const LineCondition* c : {&left, &right})
    if (!c->data.empty() && (c->data.ny != ny || c->data.values.size() != steps * ny))
      throw std::invalid_argument("strip solver: line trace does not match grid and time mesh");

  const double k = sub_.kappa();
  const double cx = k / (sub_.x_axis().dx() * sub_.x_axis().dx());
  const double cy = k / (sub_.y_axis().dx() * sub_.y_axis().dx());
  const double omega = weights_.implicit_weight();

  SpaceTimeField u(steps + 1, sub_.size());
  if (initial)
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j)
        if (!on_y_boundary(sub_, j))
          u(0, sub_.index(i, j)) = initial(sub_.x_axis().node(i), sub_.y_axis().node(j));

  Eigen::VectorXd rhs(static_cast<Eigen::Index>(sub_.size()));
  for (std::size_t n = 1; n <= steps; ++n) {
    const double b = weights_.diagonal(n);
    const auto row = weights_.row(n);
    const auto prev = u.row(n - 1);
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t g = sub_.index(i, j);
        double value = 0.0;
        if (on_y_boundary(sub_, j)) {
          value = 0.0;
        } else if (i == 0) {
          value = left.data.empty() ? 0.0 : left.data.at(n, j);
        } else if (i + 1 == nx) {
          value = right.data.empty() ? 0.0 : right.data.at(n, j);
        } else {
          double history = 0.0;
          for (std::size_t m = 1; m < n; ++m) history += row[m - 1] * (u(m, g) - u(m - 1, g));
          value = b * prev[g] - history;
          if (omega < 1.0) {
            const double lap = cx * (prev[sub_.index(i - 1, j)] - 2.0 * prev[g] + prev[sub_.index(i + 1, j)]) +
                               cy * (prev[sub_.index(i, j - 1)] - 2.0 * prev[g] + prev[sub_.index(i, j + 1)]);
            value += (1.0 - omega) * lap;
          }
          if (source) {
            const double x = sub_.x_axis().node(i);
            const double y = sub_.y_axis().node(j);
            value += weights_.level_average(n, [&](double t) { return source(x, y, t); });
          }
        }
        rhs[static_cast<Eigen::Index>(g)] = value;
      }
    }
    const std::size_t slot = lu_->level_slot[n];
    Eigen::VectorXd x = lu_->lu[slot]->solve(rhs);
    const double scale = std::max(rhs.norm(), 1e-300);
    const double residual = (lu_->matrices[slot] * x - rhs).norm() / scale;
    if (!(residual <= kResidualTolerance))
      throw NumericalError("strip solver: level " + std::to_string(n) +
                           " relative residual " + std::to_string(residual));
    for (std::size_t g = 0; g < sub_.size(); ++g) u(n, g) = x[static_cast<Eigen::Index>(g)];
  }
  return u;
}

SpaceTimeField solve_dirichlet_waveform_2d(const Subdomain2D& sub, const CaputoWeights& weights,
                                           const LineCondition& left, const LineCondition& right,
                                           const SourceTerm2D& source,
                                           const InitialProfile2D& initial) {
  if (left.kind != BoundaryKind::Dirichlet || right.kind != BoundaryKind::Dirichlet)
    throw std::invalid_argument("Dirichlet solve: both ends need Dirichlet data");
  return StripSolver(sub, weights, left.kind, right.kind).solve(left, right, source, initial);
}

SpaceTimeField solve_neumann_waveform_2d(const Subdomain2D& sub, const CaputoWeights& weights,
                                         const LineCondition& left, const LineCondition& right,
                                         const SourceTerm2D& source,
                                         const InitialProfile2D& initial) {
  if (left.kind != BoundaryKind::Neumann && right.kind != BoundaryKind::Neumann)
    throw std::invalid_argument("Neumann solve: at least one end needs flux data");
  return StripSolver(sub, weights, left.kind, right.kind).solve(left, right, source, initial);
}

LineTrace end_line_trace(const SpaceTimeField& field, const Subdomain2D& sub, Side side) {
  LineTrace out(field.levels() - 1, sub.ny());
  const std::size_t i = side == Side::Left ? 0 : sub.nx() - 1;
  for (std::size_t n = 1; n < field.levels(); ++n)
    for (std::size_t j = 0; j < sub.ny(); ++j) out.at(n, j) = field(n, sub.index(i, j));
  return out;
}

LineTrace flux_line_trace(const SpaceTimeField& field, const Subdomain2D& sub, Side side) {
  LineTrace out(field.levels() - 1, sub.ny());
  const std::size_t nx = sub.nx();
  const double c = sub.kappa() / (2.0 * sub.x_axis().dx());
  for (std::size_t n = 1; n < field.levels(); ++n) {
    for (std::size_t j = 1; j + 1 < sub.ny(); ++j) {
      if (side == Side::Left) {
        out.at(n, j) = c * (3.0 * field(n, sub.index(0, j)) - 4.0 * field(n, sub.index(1, j)) +
                            field(n, sub.index(2, j)));
      } else {
        out.at(n, j) = c * (3.0 * field(n, sub.index(nx - 1, j)) -
                            4.0 * field(n, sub.index(nx - 2, j)) + field(n, sub.index(nx - 3, j)));
      }
    }
  }
  return out;
}

}  // namespace fwr
