#include "gcm/helmholtz.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gcm {

ScalarField solve_w_direct(const ScalarField& eps, double s, const SimConfig& cfg, const HelmholtzOptions& opt) {
    if (!(s > 0.0)) throw std::domain_error("solve_w_direct: s must be positive");
    const Grid3D& g = eps.grid();
    if (!eps.all_finite() || eps.min() <= 0.0) throw std::invalid_argument("solve_w_direct: bad permittivity");
    const int nx = g.nx(), ny = g.ny(), nz = g.nz();
    const int k0 = g.plane_index(2, cfg.source_z, 1e-9);
    const bool lat_abs = cfg.lateral == LateralBoundary::Absorbing;
    const int n[3] = {nx, ny, nz};
    const double d[3] = {g.dx(), g.dy(), g.dz()};

    using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    const long N = static_cast<long>(g.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * 7);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            for (int k = 0; k < nz; ++k) {
                const long r = static_cast<long>(g.index(i, j, k));
                const double e = eps[r];
                double diag = -s * s * e;
                const int idx[3] = {i, j, k};
                for (int a = 0; a < 3; ++a) {
                    const double id2 = 1.0 / (d[a] * d[a]);
                    diag -= 2.0 * id2;
                    const bool lo = idx[a] == 0, hi = idx[a] == n[a] - 1;
                    for (int sgn = -1; sgn <= 1; sgn += 2) {
                        int nb[3] = {i, j, k};
                        nb[a] += sgn;
                        if (nb[a] < 0 || nb[a] >= n[a]) nb[a] = idx[a] - sgn;  // ghost mirrored
                        trip.emplace_back(r, static_cast<long>(g.index(nb[0], nb[1], nb[2])), id2);
                    }
                    if ((lo || hi) && (a == 2 || lat_abs)) diag -= 2.0 * s * std::sqrt(e) / d[a];
                }
                trip.emplace_back(r, r, diag);
                if (k == k0) rhs[r] = -1.0 / g.dz();
            }
        }
    }
    SpMat A(N, N);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> solver;
    solver.setTolerance(opt.tolerance);
    solver.setMaxIterations(opt.max_iterations);
    solver.compute(A);
    Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("solve_w_direct: solver did not converge (error " + std::to_string(solver.error()) + ")");
    }
    ScalarField w(g);
    for (long r = 0; r < N; ++r) w[r] = x[r];
    return w;
}

}  // namespace gcm
