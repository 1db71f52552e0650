#include "gcm/elliptic.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <cmath>
#include <stdexcept>

namespace gcm {

namespace {

void check_problem(const EllipticProblem& p) {
    const Grid3D& g = p.grid;
    if (g.nx() < 3 || g.ny() < 3 || g.nz() < 3) throw std::invalid_argument("elliptic: grid has no interior");
    for (const ScalarField& c : p.b) {
        if (c.size() != 0 && (!c.grid().same_lattice(g) || !c.all_finite())) {
            throw std::invalid_argument("elliptic: convection field mismatch or non-finite");
        }
    }
    if (p.f.size() != 0 && (!p.f.grid().same_lattice(g) || !p.f.all_finite())) {
        throw std::invalid_argument("elliptic: right-hand side mismatch or non-finite");
    }
    if (p.g.size() != BoxBoundary(g).size()) throw std::invalid_argument("elliptic: boundary trace size mismatch");
    if (!(p.tolerance > 0.0)) throw std::invalid_argument("elliptic: tolerance must be positive");
}

double bval(const ScalarField& c, std::size_t n) { return c.size() ? c[n] : 0.0; }

}  // namespace

EllipticResult solve_dirichlet(const EllipticProblem& p) {
    check_problem(p);
    const Grid3D& g = p.grid;
    const int nx = g.nx(), ny = g.ny(), nz = g.nz();
    const int mx = nx - 2, my = ny - 2, mz = nz - 2;
    const long nu = static_cast<long>(mx) * my * mz;
    auto uid = [&](int i, int j, int k) { return (static_cast<long>(i - 1) * my + (j - 1)) * mz + (k - 1); };

    EllipticResult res;
    res.u = ScalarField(g, 0.0);
    BoxBoundary bb(g);
    bb.scatter(p.g, res.u);

    const double d[3] = {g.dx(), g.dy(), g.dz()};
    using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(nu) * 7);
    Eigen::VectorXd rhs(nu);
    for (int i = 1; i < nx - 1; ++i) {
        for (int j = 1; j < ny - 1; ++j) {
            for (int k = 1; k < nz - 1; ++k) {
                const long r = uid(i, j, k);
                const std::size_t c = g.index(i, j, k);
                double diag = 0.0;
                double rr = p.f.size() ? p.f[c] : 0.0;
                for (int a = 0; a < 3; ++a) {
                    const double id2 = 1.0 / (d[a] * d[a]);
                    const double cb = bval(p.b[a], c) / (2.0 * d[a]);
                    diag -= 2.0 * id2;
                    for (int sgn = -1; sgn <= 1; sgn += 2) {
                        int ii = i, jj = j, kk = k;
                        (a == 0 ? ii : (a == 1 ? jj : kk)) += sgn;
                        const double coef = id2 + sgn * cb;
                        const bool bnd = ii == 0 || ii == nx - 1 || jj == 0 || jj == ny - 1 || kk == 0 || kk == nz - 1;
                        if (bnd) rr -= coef * res.u(ii, jj, kk);
                        else trip.emplace_back(r, uid(ii, jj, kk), coef);
                    }
                }
                trip.emplace_back(r, r, diag);
                rhs[r] = rr;
            }
        }
    }
    SpMat A(nu, nu);
    A.setFromTriplets(trip.begin(), trip.end());
    if (rhs.norm() == 0.0) {
        res.converged = true;
        return res;
    }
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> solver;
    solver.setTolerance(p.tolerance);
    solver.setMaxIterations(p.max_iterations);
    solver.compute(A);
    Eigen::VectorXd x = solver.solve(rhs);
    res.iterations = static_cast<int>(solver.iterations());
    res.relative_residual = (A * x - rhs).norm() / rhs.norm();
    res.converged = solver.info() == Eigen::Success && res.relative_residual <= p.tolerance * 10.0;
    for (int i = 1; i < nx - 1; ++i)
        for (int j = 1; j < ny - 1; ++j)
            for (int k = 1; k < nz - 1; ++k) res.u(i, j, k) = x[uid(i, j, k)];
    return res;
}

ScalarField elliptic_residual(const EllipticProblem& p, const ScalarField& u) {
    const Grid3D& g = p.grid;
    ScalarField r(g, 0.0);
    const double d[3] = {g.dx(), g.dy(), g.dz()};
    for (int i = 1; i < g.nx() - 1; ++i) {
        for (int j = 1; j < g.ny() - 1; ++j) {
            for (int k = 1; k < g.nz() - 1; ++k) {
                const std::size_t c = g.index(i, j, k);
                const double lap = (u(i + 1, j, k) - 2 * u(i, j, k) + u(i - 1, j, k)) / (d[0] * d[0]) +
                                   (u(i, j + 1, k) - 2 * u(i, j, k) + u(i, j - 1, k)) / (d[1] * d[1]) +
                                   (u(i, j, k + 1) - 2 * u(i, j, k) + u(i, j, k - 1)) / (d[2] * d[2]);
                const double gx = (u(i + 1, j, k) - u(i - 1, j, k)) / (2 * d[0]);
                const double gy = (u(i, j + 1, k) - u(i, j - 1, k)) / (2 * d[1]);
                const double gz = (u(i, j, k + 1) - u(i, j, k - 1)) / (2 * d[2]);
                r[c] = lap + bval(p.b[0], c) * gx + bval(p.b[1], c) * gy + bval(p.b[2], c) * gz -
                       (p.f.size() ? p.f[c] : 0.0);
            }
        }
    }
    return r;
}

}  // namespace gcm
