#pragma once

#include <vector>

#include "fwr/field.hpp"
#include "fwr/fractional_time.hpp"
#include "fwr/geometry.hpp"

namespace fwr {

enum class BoundaryKind { Dirichlet, Neumann };

/// Condition at one end of a subdomain over the whole time window.
///
/// Dirichlet data is the end value, Neumann data the outward flux kappa d_n u.
/// Empty values mean homogeneous data.
struct EndCondition {
  BoundaryKind kind = BoundaryKind::Dirichlet;
  std::vector<double> values;

  static EndCondition dirichlet(std::vector<double> v) { return {BoundaryKind::Dirichlet, std::move(v)}; }
  static EndCondition neumann(std::vector<double> v) { return {BoundaryKind::Neumann, std::move(v)}; }
  static EndCondition homogeneous() { return {}; }
};

/// Space-time solve of one subdomain with arbitrary end conditions.
SpaceTimeField solve_waveform(const Subdomain1D& sub, const CaputoWeights& weights,
                              const EndCondition& left, const EndCondition& right,
                              const SourceTerm& source = {}, const InitialProfile& initial = {});

/// Both ends carry Dirichlet data.
SpaceTimeField solve_dirichlet_waveform(const Subdomain1D& sub, const CaputoWeights& weights,
                                        const EndCondition& left, const EndCondition& right,
                                        const SourceTerm& source = {},
                                        const InitialProfile& initial = {});

/// At least one end carries flux data.
SpaceTimeField solve_neumann_waveform(const Subdomain1D& sub, const CaputoWeights& weights,
                                      const EndCondition& left, const EndCondition& right,
                                      const SourceTerm& source = {},
                                      const InitialProfile& initial = {});

/// Whole-domain reference solve. Interior interface nodes carry the
/// flux-balance equation built from the same one-sided fluxes the
/// decomposition drivers exchange. Boundary data are the values at the two
/// physical ends. Returns one field per subdomain (interface values repeated).
std::vector<SpaceTimeField> solve_monolithic(const Partition1D& partition,
                                             const CaputoWeights& weights,
                                             const SourceTerm& source = {},
                                             const EndCondition& left = {},
                                             const EndCondition& right = {},
                                             const InitialProfile& initial = {});

/// Trace of a field at one end over t_1..t_N.
std::vector<double> end_trace(const SpaceTimeField& field, Side side);
/// Outward flux at one end over t_1..t_N.
std::vector<double> flux_trace(const SpaceTimeField& field, Side side, const Subdomain1D& sub);

/// Largest relative row residual of the discrete equations satisfied by
/// field (diagnostic used by tests).
double waveform_residual(const Subdomain1D& sub, const CaputoWeights& weights,
                         const EndCondition& left, const EndCondition& right,
                         const SpaceTimeField& field, const SourceTerm& source = {});

}  // namespace fwr
