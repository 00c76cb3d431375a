#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gridnet/core.hpp"

namespace gridnet {

// Cells whose absolute weight sum falls below this are skipped; extends the
// exact-zero skip rule to a numerical tolerance so the 1/sum factors in the
// backward pass stay bounded.
inline constexpr double kReverseSkipTol = 1e-8;

// Cache produced by gridding_reverse_forward, consumed by the backward pass.
struct ReverseRecord {
  int resolution = 0;
  std::vector<CellIndex> cells;      // per emitted point
  std::vector<double> weight_sums;   // per emitted point, sum over 8 corners

  std::size_t point_count() const { return cells.size(); }
};

// One point per complete cell with nonzero weight sum: the weighted mean of
// the 8 vertex coordinates, normalized into (-1,1) by dividing by N/2. Cells
// are enumerated x-major, z-fastest, which fixes the emitted point order.
inline std::pair<PointCloud, ReverseRecord> gridding_reverse_forward(
    const ScalarGrid& grid) {
  require_grid_shape(grid);
  if (!grid.all_finite()) {
    throw DomainError("non-finite value in grid");
  }
  const int n = grid.resolution;
  const int h = n / 2;
  const double half = h;

  PointCloud cloud;
  ReverseRecord record;
  record.resolution = n;
  for (int cx = -h; cx <= h - 2; ++cx) {
    for (int cy = -h; cy <= h - 2; ++cy) {
      for (int cz = -h; cz <= h - 2; ++cz) {
        double sum = 0.0;
        Vec3 weighted{};
        for (const auto& off : kCellCorners) {
          const VertexCoord v{cx + off[0], cy + off[1], cz + off[2]};
          const double w = grid.at(v);
          sum += w;
          weighted += Vec3{static_cast<double>(v.x), static_cast<double>(v.y),
                           static_cast<double>(v.z)} *
                      w;
        }
        if (std::abs(sum) < kReverseSkipTol) continue;
        cloud.push_back(weighted / (sum * half));
        record.cells.push_back(CellIndex{cx, cy, cz});
        record.weight_sums.push_back(sum);
      }
    }
  }
  return {std::move(cloud), std::move(record)};
}

// Grid-shaped gradient for per-point co-gradients:
// d p_grid / d w_theta = (v_theta - p_grid) / sum, chained through the 1/(N/2)
// normalization. Accumulation follows emission order.
inline ScalarGrid gridding_reverse_backward(const ReverseRecord& record,
                                            const PointCloud& cloud,
                                            const std::vector<Vec3>& grad_points) {
  if (cloud.size() != record.point_count() ||
      grad_points.size() != record.point_count()) {
    throw ContractError("cloud/gradient size does not match reverse record");
  }
  const int n = record.resolution;
  const double half = n / 2;

  ScalarGrid grad_grid = ScalarGrid::zeros(n);
  for (std::size_t i = 0; i < record.point_count(); ++i) {
    const CellIndex& cell = record.cells[i];
    const double sum = record.weight_sums[i];
    const Vec3 p_grid = cloud[i] * half;
    const Vec3& g = grad_points[i];
    for (const auto& off : kCellCorners) {
      const VertexCoord v{cell.x + off[0], cell.y + off[1], cell.z + off[2]};
      double d = 0.0;
      for (int a = 0; a < 3; ++a) {
        d += g[a] * (static_cast<double>(v[a]) - p_grid[a]);
      }
      grad_grid.at(v) += d / (sum * half);
    }
  }
  return grad_grid;
}

}  // namespace gridnet
