#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridnet {

// Error taxonomy. DomainError: input outside an operation's domain.
// ContractError: caller broke an API contract (shape/record mismatch).
// ParseError / FormatError: malformed text / binary inputs.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double squared_norm() const { return dot(*this); }
  double norm() const { return std::sqrt(squared_norm()); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline double squared_distance(const Vec3& a, const Vec3& b) {
  return (a - b).squared_norm();
}

// Ordered sequence of 3D points; library-facing clouds live in the open
// normalized cube (-1,1)^3, enforced at the I/O boundary.
using PointCloud = std::vector<Vec3>;

// Grid vertex at integer coordinates, each axis in {-N/2, ..., N/2 - 1}.
struct VertexCoord {
  int x = 0;
  int y = 0;
  int z = 0;

  int operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  bool operator==(const VertexCoord&) const = default;
};

// Cell identified by its minimal vertex; each axis in {-N/2, ..., N/2 - 2}.
struct CellIndex {
  int x = 0;
  int y = 0;
  int z = 0;

  int operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  bool operator==(const CellIndex&) const = default;
};

// The 8 cell corners in the fixed order used everywhere a cell's vertices are
// enumerated: x-major, z-fastest.
inline constexpr std::array<std::array<int, 3>, 8> kCellCorners = {{
    {0, 0, 0},
    {0, 0, 1},
    {0, 1, 0},
    {0, 1, 1},
    {1, 0, 0},
    {1, 0, 1},
    {1, 1, 0},
    {1, 1, 1},
}};

// Clamp margin keeping scaled points strictly below the last vertex so an
// enclosing cell always exists. In grid units.
inline constexpr double kGridClampEps = 1e-6;

inline bool valid_grid_resolution(int n) { return n >= 4 && n % 2 == 0; }

inline void require_grid_resolution(int n) {
  if (!valid_grid_resolution(n)) {
    throw DomainError("grid resolution must be even and >= 4, got " +
                      std::to_string(n));
  }
}

inline bool valid_vertex(const VertexCoord& v, int n) {
  const int h = n / 2;
  return v.x >= -h && v.x < h && v.y >= -h && v.y < h && v.z >= -h && v.z < h;
}

inline bool valid_cell(const CellIndex& c, int n) {
  const int h = n / 2;
  return c.x >= -h && c.x <= h - 2 && c.y >= -h && c.y <= h - 2 && c.z >= -h &&
         c.z <= h - 2;
}

// Flat index: x-major, z-fastest. Bijective with VertexCoord for a given N.
inline std::int64_t vertex_index(const VertexCoord& v, int n) {
  const std::int64_t h = n / 2;
  const std::int64_t nn = n;
  return (v.x + h) * nn * nn + (v.y + h) * nn + (v.z + h);
}

inline VertexCoord vertex_at(std::int64_t index, int n) {
  const int h = n / 2;
  const std::int64_t nn = n;
  return VertexCoord{static_cast<int>(index / (nn * nn)) - h,
                     static_cast<int>((index / nn) % nn) - h,
                     static_cast<int>(index % nn) - h};
}

// N^3 real values on the vertex lattice, stored in flat-index order.
struct ScalarGrid {
  int resolution = 0;
  std::vector<double> values;

  static ScalarGrid zeros(int n) {
    require_grid_resolution(n);
    ScalarGrid g;
    g.resolution = n;
    g.values.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    return g;
  }

  double at(const VertexCoord& v) const {
    return values[static_cast<std::size_t>(vertex_index(v, resolution))];
  }
  double& at(const VertexCoord& v) {
    return values[static_cast<std::size_t>(vertex_index(v, resolution))];
  }

  bool all_finite() const {
    for (double w : values) {
      if (!std::isfinite(w)) return false;
    }
    return true;
  }
};

inline void require_grid_shape(const ScalarGrid& g) {
  require_grid_resolution(g.resolution);
  const std::size_t expect = static_cast<std::size_t>(g.resolution) *
                             g.resolution * g.resolution;
  if (g.values.size() != expect) {
    throw ContractError("grid value count " + std::to_string(g.values.size()) +
                        " does not match resolution " +
                        std::to_string(g.resolution));
  }
}

namespace detail {

// Scale a normalized coordinate into grid space and clamp into
// [-res/2, res/2 - 1 - eps]. Shared by the gridding and sampling operators;
// resolution validity is checked by the callers.
inline double scale_clamp_axis(double c, int res) {
  const double h = res / 2;
  const double hi = h - 1.0 - kGridClampEps;
  double q = c * h;
  if (q < -h) q = -h;
  if (q > hi) q = hi;
  return q;
}

inline Vec3 scale_clamp(const Vec3& p, int res) {
  if (!p.finite()) {
    throw DomainError("non-finite point coordinate");
  }
  return {scale_clamp_axis(p.x, res), scale_clamp_axis(p.y, res),
          scale_clamp_axis(p.z, res)};
}

}  // namespace detail

// Normalized point -> grid-space point, scaled by N/2 and clamped so an
// enclosing cell always exists.
inline Vec3 scale_to_grid(const Vec3& p, int n) {
  require_grid_resolution(n);
  return detail::scale_clamp(p, n);
}

// Grid-space point -> cell whose minimal vertex is the componentwise floor.
inline CellIndex enclosing_cell(const Vec3& q, int n) {
  require_grid_resolution(n);
  const double h = n / 2;
  const double hi = h - 1.0 - kGridClampEps;
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(q[a]) || q[a] < -h || q[a] > hi) {
      throw DomainError("grid-space coordinate outside clamped domain");
    }
  }
  return CellIndex{static_cast<int>(std::floor(q.x)),
                   static_cast<int>(std::floor(q.y)),
                   static_cast<int>(std::floor(q.z))};
}

// Indices of grid-space points within L-inf distance < 1 of vertex v.
inline std::vector<std::size_t> neighboring_points(
    const VertexCoord& v, const std::vector<Vec3>& points) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& q = points[i];
    if (std::abs(q.x - v.x) < 1.0 && std::abs(q.y - v.y) < 1.0 &&
        std::abs(q.z - v.z) < 1.0) {
      out.push_back(i);
    }
  }
  return out;
}

// Finiteness plus the open-cube invariant; used at the I/O boundary.
inline void validate_normalized_cloud(const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud[i];
    if (!p.finite()) {
      throw DomainError("point " + std::to_string(i) +
                        " has a non-finite coordinate");
    }
    for (int a = 0; a < 3; ++a) {
      if (p[a] <= -1.0 || p[a] >= 1.0) {
        throw DomainError("point " + std::to_string(i) +
                          " lies outside the open cube (-1,1)^3");
      }
    }
  }
}

}  // namespace gridnet
