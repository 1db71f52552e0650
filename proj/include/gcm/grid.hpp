#ifndef GCM_GRID_HPP
#define GCM_GRID_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gcm {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Axis-aligned box in physical coordinates (meters).
struct Box {
    Vec3 lo;
    Vec3 hi;

    bool contains(const Vec3& p, double tol = 1e-9) const;
};

/// Inclusive index range [lo, hi] along each axis.
struct IndexBox {
    std::array<int, 3> lo{0, 0, 0};
    std::array<int, 3> hi{0, 0, 0};

    int count(int axis) const { return hi[axis] - lo[axis] + 1; }
    bool contains(int i, int j, int k) const {
        return i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1] && k >= lo[2] && k <= hi[2];
    }
};

/// Uniform, axis-aligned node lattice. Storage is z-fastest:
/// flat = (i * ny + j) * nz + k.
class Grid3D {
public:
    Grid3D() = default;
    Grid3D(int nx, int ny, int nz, double dx, double dy, double dz, Vec3 origin);

    int nx() const { return n_[0]; }
    int ny() const { return n_[1]; }
    int nz() const { return n_[2]; }
    int count(int axis) const { return n_[axis]; }
    double dx() const { return d_[0]; }
    double dy() const { return d_[1]; }
    double dz() const { return d_[2]; }
    double spacing(int axis) const { return d_[axis]; }
    const Vec3& origin() const { return origin_; }
    std::size_t size() const { return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2]; }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_[1] + j) * n_[2] + k;
    }
    std::array<int, 3> unflatten(std::size_t flat) const;

    double x(int i) const { return origin_.x + i * d_[0]; }
    double y(int j) const { return origin_.y + j * d_[1]; }
    double z(int k) const { return origin_.z + k * d_[2]; }
    double coord(int axis, int idx) const;
    Vec3 node(int i, int j, int k) const { return {x(i), y(j), z(k)}; }

    /// Index of the node nearest to coordinate c along an axis; throws when
    /// c is not within tol of a grid plane.
    int plane_index(int axis, double c, double tol = 1e-9) const;
    /// Nearest node index along an axis, clamped to the grid.
    int nearest_index(int axis, double c) const;

    /// Index box of the nodes covered by a physical box that is aligned with
    /// grid planes. Throws if a face is not on a grid plane.
    IndexBox aligned_box(const Box& box) const;
    /// Sub-grid spanning an index box (shares spacing, shifted origin).
    Grid3D subgrid(const IndexBox& box) const;
    IndexBox full_box() const;

    bool same_lattice(const Grid3D& other, double tol = 1e-12) const;

private:
    std::array<int, 3> n_{0, 0, 0};
    std::array<double, 3> d_{0.0, 0.0, 0.0};
    Vec3 origin_;
};

/// Grid covering a physical box with a uniform spacing. Extents must be an
/// integer multiple of the spacing.
Grid3D build_grid(const Box& box, double spacing);

/// One real value per grid node.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(Grid3D grid, double fill = 0.0);
    ScalarField(Grid3D grid, std::vector<double> values);

    const Grid3D& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }
    double operator()(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }
    double& operator[](std::size_t n) { return values_[n]; }
    double operator[](std::size_t n) const { return values_[n]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    bool all_finite() const;
    double min() const;
    double max() const;

    /// Copy of the values inside an index box, as a field on the sub-grid.
    ScalarField restrict_to(const IndexBox& box) const;
    /// Write a sub-grid field back into the index box it came from.
    void insert(const IndexBox& box, const ScalarField& sub);

private:
    Grid3D grid_;
    std::vector<double> values_;
};

enum class Face { XMin = 0, XMax, YMin, YMax, ZMin, ZMax };

const char* face_name(Face f);

/// Canonical enumeration of the boundary nodes of a box grid. Each boundary
/// node appears once; nodes on edges are tagged with the z face first, then
/// y, then x.
class BoxBoundary {
public:
    explicit BoxBoundary(const Grid3D& grid);

    const Grid3D& grid() const { return grid_; }
    std::size_t size() const { return nodes_.size(); }
    std::span<const std::size_t> nodes() const { return nodes_; }
    std::size_t node(std::size_t n) const { return nodes_[n]; }
    Face face(std::size_t n) const { return faces_[n]; }

    std::vector<double> gather(const ScalarField& field) const;
    void scatter(std::span<const double> values, ScalarField& field) const;

private:
    Grid3D grid_;
    std::vector<std::size_t> nodes_;
    std::vector<Face> faces_;
};

}  // namespace gcm

#endif
