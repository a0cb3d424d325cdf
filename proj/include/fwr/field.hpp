#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fwr {

/// u[n][node] for time levels n = 0..N; nodes are flattened for 2D grids.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(std::size_t levels, std::size_t nodes)
      : levels_(levels), nodes_(nodes), data_(levels * nodes, 0.0) {}

  std::size_t levels() const { return levels_; }
  std::size_t nodes() const { return nodes_; }
  std::span<double> row(std::size_t n) { return {data_.data() + n * nodes_, nodes_}; }
  std::span<const double> row(std::size_t n) const { return {data_.data() + n * nodes_, nodes_}; }
  double& operator()(std::size_t n, std::size_t i) { return data_[n * nodes_ + i]; }
  double operator()(std::size_t n, std::size_t i) const { return data_[n * nodes_ + i]; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t levels_ = 0;
  std::size_t nodes_ = 0;
  std::vector<double> data_;
};

/// Interface function of time sampled at t_1..t_N (the value at t_0 comes from
/// the initial data).
struct WaveformTrace {
  std::size_t interface_id = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

using SourceTerm = std::function<double(double x, double t)>;
using InitialProfile = std::function<double(double x)>;
using SourceTerm2D = std::function<double(double x, double y, double t)>;
using InitialProfile2D = std::function<double(double x, double y)>;

}  // namespace fwr
