#include "rover/terrain.hpp"

#include <cmath>

namespace rover {

void TerrainProfile::validate() const {
  if (step_height < 0) throw std::invalid_argument("step height must be non-negative");
  if (extent <= 0) throw std::invalid_argument("terrain extent must be positive");
  if (step_x < 0 || step_x > extent)
    throw std::invalid_argument("step face must lie inside the terrain extent");
}

double terrain_height(const TerrainProfile& profile, double x) {
  if (x < 0.0 || x > profile.extent)
    throw OutOfWorldError("terrain query outside [0, extent]");
  return x < profile.step_x ? 0.0 : profile.step_height;
}

SurfacePoint nearest_surface(const TerrainProfile& profile, const Vec2& p) {
  const double sx = profile.step_x;
  const double h = profile.step_height;
  SurfacePoint sp;

  if (p.x > sx) {
    if (p.z >= h) {
      sp.closest = {p.x, h};
      sp.normal = {0.0, 1.0};
      sp.distance = p.z - h;
      sp.feature = TerrainFeature::upper_floor;
    } else {
      // Centre inside the step solid: exit through the nearer surface.
      if (h - p.z <= p.x - sx) {
        sp.closest = {p.x, h};
        sp.normal = {0.0, 1.0};
        sp.distance = p.z - h;
        sp.feature = TerrainFeature::upper_floor;
      } else {
        sp.closest = {sx, p.z};
        sp.normal = {-1.0, 0.0};
        sp.distance = sx - p.x;
        sp.feature = TerrainFeature::face;
      }
    }
    return sp;
  }

  if (p.z <= 0.0) {
    sp.closest = {p.x, 0.0};
    sp.normal = {0.0, 1.0};
    sp.distance = p.z;
    sp.feature = TerrainFeature::lower_floor;
    return sp;
  }

  // Candidate 1: straight down to the lower floor.
  double best = p.z;
  sp.closest = {p.x, 0.0};
  sp.normal = {0.0, 1.0};
  sp.feature = TerrainFeature::lower_floor;

  if (h > 0.0) {
    if (p.z <= h) {
      // Candidate 2: horizontally to the vertical face.
      const double d_face = sx - p.x;
      if (d_face < best) {
        best = d_face;
        sp.closest = {sx, p.z};
        sp.normal = {-1.0, 0.0};
        sp.feature = TerrainFeature::face;
      }
    } else {
      // Candidate 2: the step corner as a point feature.
      const Vec2 corner{sx, h};
      const Vec2 rel = p - corner;
      const double d_corner = rel.norm();
      if (d_corner < best) {
        best = d_corner;
        sp.closest = corner;
        sp.normal = d_corner > 1e-12 ? rel / d_corner : Vec2{0.0, 1.0};
        sp.feature = TerrainFeature::corner;
      }
    }
  }
  sp.distance = best;
  return sp;
}

}  // namespace rover
