#pragma once

#include <stdexcept>

#include "rover/vec2.hpp"

namespace rover {

struct OutOfWorldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat floor with a single rectangular step of height `step_height` whose
// vertical face sits at x = step_x.  Heights are measured from the lower
// floor (z = 0).
struct TerrainProfile {
  double step_x = 3.5;
  double step_height = 0.30;
  double extent = 40.0;

  void validate() const;
};

// Surface height under a query abscissa.  Throws OutOfWorldError outside
// [0, extent].
double terrain_height(const TerrainProfile& profile, double x);

enum class TerrainFeature { lower_floor, face, corner, upper_floor };

// Closest point on the terrain boundary to a query point, with the outward
// surface normal at that point.  The step corner acts as a point feature
// whose normal points from the corner to the query.
struct SurfacePoint {
  Vec2 closest{};
  Vec2 normal{0.0, 1.0};
  double distance = 0.0;  // from query to closest surface point
  TerrainFeature feature = TerrainFeature::lower_floor;
};

SurfacePoint nearest_surface(const TerrainProfile& profile, const Vec2& p);

}  // namespace rover
