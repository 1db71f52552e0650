#include "gcm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gcm {

bool Box::contains(const Vec3& p, double tol) const {
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol &&
           p.z >= lo.z - tol && p.z <= hi.z + tol;
}

Grid3D::Grid3D(int nx, int ny, int nz, double dx, double dy, double dz, Vec3 origin)
    : n_{nx, ny, nz}, d_{dx, dy, dz}, origin_(origin) {
    if (nx < 2 || ny < 2 || nz < 2) {
        throw std::invalid_argument("Grid3D: every axis needs at least 2 nodes");
    }
    if (!(dx > 0.0) || !(dy > 0.0) || !(dz > 0.0)) {
        throw std::invalid_argument("Grid3D: spacings must be positive");
    }
}

std::array<int, 3> Grid3D::unflatten(std::size_t flat) const {
    const int k = static_cast<int>(flat % n_[2]);
    const std::size_t ij = flat / n_[2];
    const int j = static_cast<int>(ij % n_[1]);
    const int i = static_cast<int>(ij / n_[1]);
    return {i, j, k};
}

double Grid3D::coord(int axis, int idx) const {
    switch (axis) {
        case 0: return x(idx);
        case 1: return y(idx);
        default: return z(idx);
    }
}

namespace {
double origin_of(const Vec3& o, int axis) {
    return axis == 0 ? o.x : (axis == 1 ? o.y : o.z);
}
}  // namespace

int Grid3D::plane_index(int axis, double c, double tol) const {
    const double r = (c - origin_of(origin_, axis)) / d_[axis];
    const double idx = std::round(r);
    if (std::abs(r - idx) * d_[axis] > tol && std::abs(r - idx) > 1e-6) {
        throw std::invalid_argument("coordinate " + std::to_string(c) + " is not on a grid plane");
    }
    if (idx < 0 || idx >= n_[axis]) {
        throw std::out_of_range("coordinate " + std::to_string(c) + " outside grid");
    }
    return static_cast<int>(idx);
}

int Grid3D::nearest_index(int axis, double c) const {
    const double r = std::round((c - origin_of(origin_, axis)) / d_[axis]);
    return static_cast<int>(std::clamp(r, 0.0, static_cast<double>(n_[axis] - 1)));
}

IndexBox Grid3D::aligned_box(const Box& box) const {
    IndexBox ib;
    const std::array<double, 3> lo{box.lo.x, box.lo.y, box.lo.z};
    const std::array<double, 3> hi{box.hi.x, box.hi.y, box.hi.z};
    for (int a = 0; a < 3; ++a) {
        ib.lo[a] = plane_index(a, lo[a]);
        ib.hi[a] = plane_index(a, hi[a]);
        if (ib.hi[a] <= ib.lo[a]) {
            throw std::invalid_argument("aligned_box: degenerate box");
        }
    }
    return ib;
}

Grid3D Grid3D::subgrid(const IndexBox& b) const {
    return Grid3D(b.count(0), b.count(1), b.count(2), d_[0], d_[1], d_[2],
                  Vec3{x(b.lo[0]), y(b.lo[1]), z(b.lo[2])});
}

IndexBox Grid3D::full_box() const {
    return IndexBox{{0, 0, 0}, {n_[0] - 1, n_[1] - 1, n_[2] - 1}};
}

bool Grid3D::same_lattice(const Grid3D& o, double tol) const {
    for (int a = 0; a < 3; ++a) {
        if (n_[a] != o.n_[a] || std::abs(d_[a] - o.d_[a]) > tol) return false;
    }
    return std::abs(origin_.x - o.origin_.x) <= tol && std::abs(origin_.y - o.origin_.y) <= tol &&
           std::abs(origin_.z - o.origin_.z) <= tol;
}

Grid3D build_grid(const Box& box, double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw std::invalid_argument("build_grid: spacing must be positive");
    }
    const std::array<double, 3> ext{box.hi.x - box.lo.x, box.hi.y - box.lo.y, box.hi.z - box.lo.z};
    std::array<int, 3> n{};
    for (int a = 0; a < 3; ++a) {
        if (!(ext[a] > 0.0)) {
            throw std::invalid_argument("build_grid: extents must be positive");
        }
        const double cells = ext[a] / spacing;
        const double rounded = std::round(cells);
        if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
            throw std::invalid_argument("build_grid: extent is not an integer multiple of the spacing");
        }
        n[a] = static_cast<int>(rounded) + 1;
    }
    return Grid3D(n[0], n[1], n[2], spacing, spacing, spacing, box.lo);
}

ScalarField::ScalarField(Grid3D grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(Grid3D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("ScalarField: value count does not match grid");
    }
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField ScalarField::restrict_to(const IndexBox& b) const {
    ScalarField out(grid_.subgrid(b));
    for (int i = 0; i < b.count(0); ++i)
        for (int j = 0; j < b.count(1); ++j)
            for (int k = 0; k < b.count(2); ++k)
                out(i, j, k) = (*this)(b.lo[0] + i, b.lo[1] + j, b.lo[2] + k);
    return out;
}

void ScalarField::insert(const IndexBox& b, const ScalarField& sub) {
    if (sub.grid().nx() != b.count(0) || sub.grid().ny() != b.count(1) || sub.grid().nz() != b.count(2)) {
        throw std::invalid_argument("ScalarField::insert: shape mismatch");
    }
    for (int i = 0; i < b.count(0); ++i)
        for (int j = 0; j < b.count(1); ++j)
            for (int k = 0; k < b.count(2); ++k)
                (*this)(b.lo[0] + i, b.lo[1] + j, b.lo[2] + k) = sub(i, j, k);
}

const char* face_name(Face f) {
    switch (f) {
        case Face::XMin: return "xmin";
        case Face::XMax: return "xmax";
        case Face::YMin: return "ymin";
        case Face::YMax: return "ymax";
        case Face::ZMin: return "zmin";
        case Face::ZMax: return "zmax";
    }
    return "?";
}

BoxBoundary::BoxBoundary(const Grid3D& grid) : grid_(grid) {
    const int nx = grid.nx(), ny = grid.ny(), nz = grid.nz();
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            for (int k = 0; k < nz; ++k) {
                Face f;
                if (k == nz - 1) f = Face::ZMax;
                else if (k == 0) f = Face::ZMin;
                else if (j == 0) f = Face::YMin;
                else if (j == ny - 1) f = Face::YMax;
                else if (i == 0) f = Face::XMin;
                else if (i == nx - 1) f = Face::XMax;
                else continue;
                nodes_.push_back(grid.index(i, j, k));
                faces_.push_back(f);
            }
        }
    }
}

std::vector<double> BoxBoundary::gather(const ScalarField& field) const {
    if (!field.grid().same_lattice(grid_)) {
        throw std::invalid_argument("BoxBoundary::gather: grid mismatch");
    }
    std::vector<double> out(nodes_.size());
    for (std::size_t n = 0; n < nodes_.size(); ++n) out[n] = field[nodes_[n]];
    return out;
}

void BoxBoundary::scatter(std::span<const double> values, ScalarField& field) const {
    if (values.size() != nodes_.size() || !field.grid().same_lattice(grid_)) {
        throw std::invalid_argument("BoxBoundary::scatter: size or grid mismatch");
    }
    for (std::size_t n = 0; n < nodes_.size(); ++n) field[nodes_[n]] = values[n];
}

}  // namespace gcm
