#pragma once

#include <algorithm>
#include <array>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridnet/core.hpp"

namespace gridnet {

// Cache produced by gridding_forward, consumed by gridding_backward.
struct GriddingRecord {
  int resolution = 0;
  // Per point: grid-space coordinates after scaling/clamping, the enclosing
  // cell, and the 8 corner weights in kCellCorners order.
  std::vector<Vec3> grid_points;
  std::vector<CellIndex> cells;
  std::vector<std::array<double, 8>> weights;
  // Sparse neighbor counts: flat vertex index -> |N(v)|.
  std::unordered_map<std::int64_t, int> neighbor_counts;

  std::size_t point_count() const { return grid_points.size(); }
};

namespace detail {

struct CornerWeights {
  CellIndex cell;
  // Per-axis factors for corner offsets 0 and 1: f[axis][0] = 1 - t,
  // f[axis][1] = t, with t the fractional offset inside the cell.
  double f[3][2];
};

inline CornerWeights corner_weights(const Vec3& q) {
  CornerWeights cw;
  cw.cell = CellIndex{static_cast<int>(std::floor(q.x)),
                      static_cast<int>(std::floor(q.y)),
                      static_cast<int>(std::floor(q.z))};
  for (int a = 0; a < 3; ++a) {
    const double t = q[a] - cw.cell[a];
    cw.f[a][0] = 1.0 - t;
    cw.f[a][1] = t;
  }
  return cw;
}

}  // namespace detail

// Standard (hard) voxelization: w = 1 iff the vertex has a neighboring point.
inline ScalarGrid voxelize(const PointCloud& cloud, int n) {
  ScalarGrid grid = ScalarGrid::zeros(n);
  for (const Vec3& p : cloud) {
    const Vec3 q = scale_to_grid(p, n);
    const detail::CornerWeights cw = detail::corner_weights(q);
    for (const auto& off : kCellCorners) {
      const double w =
          cw.f[0][off[0]] * cw.f[1][off[1]] * cw.f[2][off[2]];
      if (w > 0.0) {
        const VertexCoord v{cw.cell.x + off[0], cw.cell.y + off[1],
                            cw.cell.z + off[2]};
        grid.at(v) = 1.0;
      }
    }
  }
  return grid;
}

// Differentiable scatter: each vertex receives the mean trilinear weight of
// its neighboring points. Per-vertex contributions are summed in sorted order
// so the output grid is bit-identical under any permutation of the cloud.
inline std::pair<ScalarGrid, GriddingRecord> gridding_forward(
    const PointCloud& cloud, int n) {
  ScalarGrid grid = ScalarGrid::zeros(n);
  GriddingRecord record;
  record.resolution = n;
  record.grid_points.reserve(cloud.size());
  record.cells.reserve(cloud.size());
  record.weights.reserve(cloud.size());

  std::unordered_map<std::int64_t, std::vector<double>> contributions;
  for (const Vec3& p : cloud) {
    const Vec3 q = scale_to_grid(p, n);
    const detail::CornerWeights cw = detail::corner_weights(q);
    std::array<double, 8> ws{};
    for (int j = 0; j < 8; ++j) {
      const auto& off = kCellCorners[j];
      const double w =
          cw.f[0][off[0]] * cw.f[1][off[1]] * cw.f[2][off[2]];
      ws[j] = w;
      if (w > 0.0) {
        const VertexCoord v{cw.cell.x + off[0], cw.cell.y + off[1],
                            cw.cell.z + off[2]};
        contributions[vertex_index(v, n)].push_back(w);
      }
    }
    record.grid_points.push_back(q);
    record.cells.push_back(cw.cell);
    record.weights.push_back(ws);
  }

  record.neighbor_counts.reserve(contributions.size());
  for (auto& [index, ws] : contributions) {
    std::sort(ws.begin(), ws.end());
    double sum = 0.0;
    for (double w : ws) sum += w;
    grid.values[static_cast<std::size_t>(index)] =
        sum / static_cast<double>(ws.size());
    record.neighbor_counts.emplace(index, static_cast<int>(ws.size()));
  }
  return {std::move(grid), std::move(record)};
}

// Per-point coordinate co-gradients for a grid-shaped upstream gradient.
// Piecewise derivative of the trilinear weight (sign flips where the point
// coordinate exceeds the vertex coordinate, "<=" branch at kinks), divided by
// the vertex neighbor count, then scaled by N/2 to chain back through
// scale_to_grid into normalized coordinates.
inline std::vector<Vec3> gridding_backward(const GriddingRecord& record,
                                           const ScalarGrid& grad_grid) {
  require_grid_shape(grad_grid);
  if (grad_grid.resolution != record.resolution) {
    throw ContractError("gradient grid resolution does not match record");
  }
  if (!grad_grid.all_finite()) {
    throw DomainError("non-finite value in gradient grid");
  }
  const int n = record.resolution;
  const double half = n / 2;

  std::vector<Vec3> grads(record.point_count());
  for (std::size_t i = 0; i < record.point_count(); ++i) {
    const Vec3& q = record.grid_points[i];
    const CellIndex& cell = record.cells[i];
    const detail::CornerWeights cw = detail::corner_weights(q);
    Vec3 g{};
    for (int j = 0; j < 8; ++j) {
      if (record.weights[i][j] <= 0.0) continue;  // not a neighboring vertex
      const auto& off = kCellCorners[j];
      const VertexCoord v{cell.x + off[0], cell.y + off[1], cell.z + off[2]};
      const std::int64_t index = vertex_index(v, n);
      const double upstream =
          grad_grid.values[static_cast<std::size_t>(index)];
      if (upstream == 0.0) continue;
      const auto it = record.neighbor_counts.find(index);
      if (it == record.neighbor_counts.end()) {
        throw ContractError("record neighbor counts are inconsistent");
      }
      const double inv_count = 1.0 / static_cast<double>(it->second);
      for (int a = 0; a < 3; ++a) {
        const double sign = q[a] > static_cast<double>(v[a]) ? -1.0 : 1.0;
        const int b = (a + 1) % 3;
        const int c = (a + 2) % 3;
        const double cross = cw.f[b][off[b]] * cw.f[c][off[c]];
        g[a] += upstream * sign * cross * inv_count;
      }
    }
    grads[i] = g * half;
  }
  return grads;
}

}  // namespace gridnet
