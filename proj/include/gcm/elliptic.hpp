#ifndef GCM_ELLIPTIC_HPP
#define GCM_ELLIPTIC_HPP

#include <array>
#include <vector>

#include "gcm/grid.hpp"

namespace gcm {

/// lap u + b . grad u = f in the box, u = g on its boundary.
/// Empty b components or an empty f mean zero. g is in BoxBoundary order.
struct EllipticProblem {
    Grid3D grid;
    std::array<ScalarField, 3> b;
    ScalarField f;
    std::vector<double> g;
    double tolerance = 1e-8;
    int max_iterations = 5000;
};

struct EllipticResult {
    ScalarField u;
    bool converged = false;
    int iterations = 0;
    double relative_residual = 0.0;
};

/// 7-point Laplacian, centered first differences. Boundary values are
/// copied from g exactly.
EllipticResult solve_dirichlet(const EllipticProblem& p);

/// lap u + b . grad u - f at interior nodes (0 on the boundary).
ScalarField elliptic_residual(const EllipticProblem& p, const ScalarField& u);

}  // namespace gcm

#endif
