#include "gcm/fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gcm {

int SimConfig::steps() const { return static_cast<int>(std::llround(T / dt)); }

void SimConfig::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("sim: T must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("sim: dt must be positive");
    if (dt > T) throw std::invalid_argument("sim: dt larger than T");
}

std::vector<double> BoundaryTraces::trace(std::size_t b) const {
    std::vector<double> tr(nt);
    for (int it = 0; it < nt; ++it) tr[it] = at(it, b);
    return tr;
}

std::size_t BoundaryTraces::face_node_count(Face f) const {
    std::size_t n = 0;
    for (std::size_t b = 0; b < boundary.size(); ++b)
        if (boundary.face(b) == f) ++n;
    return n;
}

FdtdResult run_fdtd(const MediumModel& medium, const Waveform& w, const SimConfig& cfg,
                    const RecordRequest& record) {
    cfg.validate();
    w.validate();
    const ScalarField& eps = medium.eps;
    const Grid3D& g = eps.grid();
    if (!eps.all_finite() || eps.min() <= 0.0) throw std::invalid_argument("fdtd: permittivity must be positive");
    const double dt = cfg.dt;
    const double dmin = std::min({g.dx(), g.dy(), g.dz()});
    const double cmax = 1.0 / std::sqrt(eps.min());
    if (dt > dmin / (std::sqrt(3.0) * cmax) * (1.0 + 1e-12)) {
        throw std::invalid_argument("fdtd: CFL condition violated (dt=" + std::to_string(dt) + ")");
    }
    const int nx = g.nx(), ny = g.ny(), nz = g.nz();
    const int k0 = g.plane_index(2, cfg.source_z, 1e-9);
    const int nsteps = cfg.steps();
    const int nt = nsteps + 1;

    FdtdResult res;
    res.steps = nsteps;
    std::vector<int> plane_k;
    for (double z : record.planes) {
        plane_k.push_back(g.plane_index(2, z, 1e-9));
        res.planes.emplace_back(nx, ny, nt, dt, g.dx(), g.dy(), g.z(plane_k.back()), 0.0, g.origin().x,
                                g.origin().y);
    }
    if (record.boundary) {
        const IndexBox& ob = *record.boundary;
        for (int a = 0; a < 3; ++a) {
            if (ob.lo[a] < 0 || ob.hi[a] >= g.count(a) || ob.hi[a] <= ob.lo[a]) {
                throw std::invalid_argument("fdtd: boundary box outside grid");
            }
        }
        BoundaryTraces bt;
        bt.omega_grid = g.subgrid(ob);
        bt.boundary = BoxBoundary(bt.omega_grid);
        bt.nt = nt;
        bt.dt = dt;
        bt.values.assign(static_cast<std::size_t>(nt) * bt.boundary.size(), 0.0);
        res.boundary = std::move(bt);
    }
    std::vector<std::size_t> bnodes;
    if (res.boundary) {
        const IndexBox& ob = *record.boundary;
        for (std::size_t n : res.boundary->boundary.nodes()) {
            const auto ijk = res.boundary->omega_grid.unflatten(n);
            bnodes.push_back(g.index(ob.lo[0] + ijk[0], ob.lo[1] + ijk[1], ob.lo[2] + ijk[2]));
        }
    }
    for (double s : record.laplace_s) {
        if (!(s > 0.0)) throw std::invalid_argument("fdtd: Laplace parameter must be positive");
        res.laplace.emplace_back(g, 0.0);
    }

    const std::size_t N = g.size();
    std::vector<double> um(N, 0.0), u(N, 0.0), up(N, 0.0);
    const double idx2 = 1.0 / (g.dx() * g.dx()), idy2 = 1.0 / (g.dy() * g.dy()), idz2 = 1.0 / (g.dz() * g.dz());
    const double dt2 = dt * dt;
    const bool lat_abs = cfg.lateral == LateralBoundary::Absorbing;

    // absorbing weight per node: sqrt(eps)/dt * sum over absorbing faces of 1/d
    auto absorb_coeff = [&](int i, int j, int k) {
        double a = 0.0;
        if (k == 0 || k == nz - 1) a += 1.0 / g.dz();
        if (lat_abs) {
            if (i == 0 || i == nx - 1) a += 1.0 / g.dx();
            if (j == 0 || j == ny - 1) a += 1.0 / g.dy();
        }
        return a;
    };

    auto record_step = [&](int it) {
        for (std::size_t p = 0; p < plane_k.size(); ++p) {
            TimeSeriesCube& c = res.planes[p];
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny; ++j) c(i, j, it) = u[g.index(i, j, plane_k[p])];
        }
        if (res.boundary) {
            double* dst = res.boundary->values.data() + static_cast<std::size_t>(it) * bnodes.size();
            for (std::size_t b = 0; b < bnodes.size(); ++b) dst[b] = u[bnodes[b]];
        }
        if (!record.laplace_s.empty()) {
            const double t = it * dt;
            const double wq = (it == 0 || it == nsteps) ? 0.5 * dt : dt;
            for (std::size_t q = 0; q < record.laplace_s.size(); ++q) {
                const double f = wq * std::exp(-record.laplace_s[q] * t);
                std::vector<double>& acc = res.laplace[q].data();
                for (std::size_t n = 0; n < N; ++n) acc[n] += f * u[n];
            }
        }
    };

    record_step(0);
    const double* e = eps.data().data();
    for (int n = 0; n < nsteps; ++n) {
        const double t = n * dt;
        const double F = waveform_value(w, t) / g.dz();
        // u^{-1} = u^1 for zero initial velocity gives the half-step start
        const double half = (n == 0) ? 0.5 : 1.0;
        for (int i = 0; i < nx; ++i) {
            const int im = i == 0 ? 1 : i - 1;
            const int ip = i == nx - 1 ? nx - 2 : i + 1;
            for (int j = 0; j < ny; ++j) {
                const int jm = j == 0 ? 1 : j - 1;
                const int jp = j == ny - 1 ? ny - 2 : j + 1;
                const std::size_t base = g.index(i, j, 0);
                const std::size_t bxm = g.index(im, j, 0), bxp = g.index(ip, j, 0);
                const std::size_t bym = g.index(i, jm, 0), byp = g.index(i, jp, 0);
                const bool lat_edge = lat_abs && (i == 0 || i == nx - 1 || j == 0 || j == ny - 1);
                for (int k = 0; k < nz; ++k) {
                    const int km = k == 0 ? 1 : k - 1;
                    const int kp = k == nz - 1 ? nz - 2 : k + 1;
                    const std::size_t c = base + k;
                    const double uc = u[c];
                    double lap = (u[bxm + k] + u[bxp + k] - 2.0 * uc) * idx2 +
                                 (u[bym + k] + u[byp + k] - 2.0 * uc) * idy2 +
                                 (u[base + km] + u[base + kp] - 2.0 * uc) * idz2;
                    if (k == k0) lap += F;
                    const double ec = e[c];
                    if (n == 0) {
                        up[c] = half * dt2 * lap / ec;
                    } else if (k == 0 || k == nz - 1 || lat_edge) {
                        const double a = std::sqrt(ec) / dt * absorb_coeff(i, j, k);
                        const double m = ec / dt2;
                        up[c] = (m * (2.0 * uc - um[c]) + a * um[c] + lap) / (m + a);
                    } else {
                        up[c] = 2.0 * uc - um[c] + dt2 * lap / ec;
                    }
                }
            }
        }
        std::swap(um, u);
        std::swap(u, up);
        if ((n + 1) % 50 == 0 || n + 1 == nsteps) {
            for (std::size_t c = 0; c < N; ++c) {
                if (!std::isfinite(u[c])) {
                    throw std::runtime_error("fdtd: non-finite field at step " + std::to_string(n + 1));
                }
            }
        }
        record_step(n + 1);
    }
    return res;
}

const BoundaryTraces& record_boundary(const FdtdResult& run, const IndexBox& omega) {
    if (!run.boundary) throw std::invalid_argument("record_boundary: run did not record a boundary");
    const Grid3D& og = run.boundary->omega_grid;
    if (og.nx() != omega.count(0) || og.ny() != omega.count(1) || og.nz() != omega.count(2)) {
        throw std::invalid_argument("record_boundary: box differs from the recorded one");
    }
    return *run.boundary;
}

}  // namespace gcm
