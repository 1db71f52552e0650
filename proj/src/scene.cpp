#include "gcm/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gcm {

const char* shape_name(Shape s) {
    switch (s) {
        case Shape::Box: return "box";
        case Shape::Sphere: return "sphere";
        case Shape::Cylinder: return "cylinder";
    }
    return "?";
}

Shape parse_shape(const std::string& name) {
    if (name == "box") return Shape::Box;
    if (name == "sphere") return Shape::Sphere;
    if (name == "cylinder") return Shape::Cylinder;
    throw std::invalid_argument("unknown inclusion shape '" + name + "'");
}

bool Inclusion::contains(const Vec3& p, double tol) const {
    const double dx = p.x - center.x, dy = p.y - center.y, dz = p.z - center.z;
    switch (shape) {
        case Shape::Box:
            return std::abs(dx) <= 0.5 * size.x + tol && std::abs(dy) <= 0.5 * size.y + tol &&
                   std::abs(dz) <= 0.5 * size.z + tol;
        case Shape::Sphere:
            return dx * dx + dy * dy + dz * dz <= (radius + tol) * (radius + tol);
        case Shape::Cylinder: {
            const double d[3] = {dx, dy, dz};
            double r2 = 0.0;
            for (int a = 0; a < 3; ++a)
                if (a != axis) r2 += d[a] * d[a];
            return std::abs(d[axis]) <= 0.5 * height + tol && r2 <= (radius + tol) * (radius + tol);
        }
    }
    return false;
}

Box Inclusion::bounding_box() const {
    Vec3 half;
    switch (shape) {
        case Shape::Box: half = {0.5 * size.x, 0.5 * size.y, 0.5 * size.z}; break;
        case Shape::Sphere: half = {radius, radius, radius}; break;
        case Shape::Cylinder:
            half = {radius, radius, radius};
            if (axis == 0) half.x = 0.5 * height;
            if (axis == 1) half.y = 0.5 * height;
            if (axis == 2) half.z = 0.5 * height;
            break;
    }
    return Box{{center.x - half.x, center.y - half.y, center.z - half.z},
               {center.x + half.x, center.y + half.y, center.z + half.z}};
}

void MediumModel::validate() const {
    for (double v : eps.values()) {
        if (!std::isfinite(v)) throw std::domain_error("medium: non-finite permittivity");
        if (v < eps_lower - 1e-12 || v > eps_upper + 1e-12) {
            throw std::domain_error("medium: permittivity " + std::to_string(v) + " outside [" +
                                    std::to_string(eps_lower) + ", " + std::to_string(eps_upper) + "]");
        }
    }
}

void MediumModel::require_unit_outside(const IndexBox& omega) const {
    const Grid3D& g = eps.grid();
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j)
            for (int k = 0; k < g.nz(); ++k)
                if (!omega.contains(i, j, k) && eps(i, j, k) != 1.0) {
                    throw std::domain_error("medium: eps != 1 outside the inversion box");
                }
}

MediumModel homogeneous_medium(const Grid3D& grid, double eps) {
    return MediumModel{ScalarField(grid, eps), std::min(1.0, eps), std::max(25.0, eps)};
}

MediumModel rasterize_scene(const SceneSpec& scene, const Grid3D& grid, double eps_lower,
                            double eps_upper) {
    if (scene.source_z >= scene.omega.lo.z - 1e-12 && scene.source_z <= scene.omega.hi.z + 1e-12) {
        throw std::invalid_argument("scene: source plane intersects the closed inversion box");
    }
    auto in_bounds = [&](double e) { return e >= eps_lower - 1e-12 && e <= eps_upper + 1e-12; };
    if (!in_bounds(scene.background_eps)) {
        throw std::invalid_argument("scene: background permittivity outside bounds");
    }
    if (scene.half_space && !in_bounds(scene.half_space->eps)) {
        throw std::invalid_argument("scene: half-space permittivity outside bounds");
    }
    for (const Inclusion& inc : scene.inclusions) {
        const Box bb = inc.bounding_box();
        if (!scene.omega.contains(bb.lo) || !scene.omega.contains(bb.hi)) {
            throw std::invalid_argument(std::string("scene: ") + shape_name(inc.shape) +
                                        " inclusion extends outside the inversion box");
        }
        if (!in_bounds(inc.eps)) {
            throw std::invalid_argument("scene: inclusion permittivity outside bounds");
        }
    }

    MediumModel m{ScalarField(grid, scene.background_eps), eps_lower, eps_upper};
    for (int i = 0; i < grid.nx(); ++i) {
        for (int j = 0; j < grid.ny(); ++j) {
            for (int k = 0; k < grid.nz(); ++k) {
                const Vec3 p = grid.node(i, j, k);
                double e = scene.background_eps;
                if (scene.half_space && p.z <= scene.half_space->surface_z + 1e-9) e = scene.half_space->eps;
                for (const Inclusion& inc : scene.inclusions)
                    if (inc.contains(p)) e = inc.eps;
                m.eps(i, j, k) = e;
            }
        }
    }
    m.validate();
    return m;
}

}  // namespace gcm
