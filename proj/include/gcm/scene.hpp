#ifndef GCM_SCENE_HPP
#define GCM_SCENE_HPP

#include <optional>
#include <string>
#include <vector>

#include "gcm/grid.hpp"

namespace gcm {

enum class Shape { Box, Sphere, Cylinder };

const char* shape_name(Shape s);
Shape parse_shape(const std::string& name);

/// A homogeneous inclusion. Boxes use `size` (full edge lengths); spheres use
/// `radius`; cylinders use `radius` and `height` along `axis` (0, 1 or 2).
struct Inclusion {
    Shape shape = Shape::Box;
    Vec3 center;
    Vec3 size;
    double radius = 0.0;
    double height = 0.0;
    int axis = 2;
    double eps = 1.0;

    bool contains(const Vec3& p, double tol = 1e-9) const;
    Box bounding_box() const;
};

/// Half-space z <= surface_z filled with a different permittivity (the sand
/// slab of the two-layer scenes). Not subject to the inside-Omega rule.
struct HalfSpace {
    double surface_z = 0.0;
    double eps = 4.0;
};

struct SceneSpec {
    std::vector<Inclusion> inclusions;
    double background_eps = 1.0;
    std::optional<HalfSpace> half_space;
    Box omega;             ///< inversion box
    double source_z = 0.1; ///< plane of the incident-wave source
    double omega_freq = 30.0;
};

/// Permittivity on a grid with bounds. For inversion media eps is 1 outside
/// the inversion box.
struct MediumModel {
    ScalarField eps;
    double eps_lower = 1.0;
    double eps_upper = 25.0;

    /// Throws if values leave [eps_lower, eps_upper] or are not finite.
    void validate() const;
    /// Throws unless eps == 1 at every node outside the index box.
    void require_unit_outside(const IndexBox& omega) const;
};

MediumModel homogeneous_medium(const Grid3D& grid, double eps = 1.0);

/// Rasterize a scene onto grid nodes. Later inclusions overwrite earlier
/// ones. Inclusions must lie inside scene.omega and the source plane must not
/// intersect the closed inversion box.
MediumModel rasterize_scene(const SceneSpec& scene, const Grid3D& grid, double eps_lower = 1.0,
                            double eps_upper = 25.0);

}  // namespace gcm

#endif
