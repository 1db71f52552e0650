#include "gcm/laplace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gcm {

void PseudoFrequencyGrid::validate() const {
    if (!(s_under > 0.0)) throw std::invalid_argument("s-grid: s_under must be positive");
    if (!(s_bar > s_under)) throw std::invalid_argument("s-grid: s_bar must exceed s_under");
    if (!(h > 0.0)) throw std::invalid_argument("s-grid: h must be positive");
    const double r = (s_bar - s_under) / h;
    if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r)) {
        throw std::invalid_argument("s-grid: (s_bar - s_under)/h must be an integer");
    }
    if (s_under - h <= 0.0) throw std::invalid_argument("s-grid: s_under - h must stay positive");
}

int PseudoFrequencyGrid::N() const { return static_cast<int>(std::llround((s_bar - s_under) / h)); }

double laplace_transform(std::span<const double> series, double dt, double s, double t0) {
    if (!(s > 0.0)) throw std::domain_error("laplace_transform: s must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("laplace_transform: dt must be positive");
    const std::size_t n = series.size();
    if (n < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double wk = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        acc += wk * series[k] * std::exp(-s * (t0 + k * dt));
    }
    return acc * dt;
}

double compute_w0(double z, double z0, double s) {
    return std::exp(-s * std::abs(z - z0)) / (2.0 * s);
}

double v0_exact(double z, double z0, double s) {
    return -(s * std::abs(z - z0) + std::log(2.0 * s)) / (s * s);
}

double dv0_ds_exact(double z, double z0, double s) {
    // d/ds of -(s d + ln 2s)/s^2
    const double d = std::abs(z - z0);
    return d / (s * s) + (2.0 * std::log(2.0 * s) - 1.0) / (s * s * s);
}

std::vector<double> w_from_cube(const TimeSeriesCube& cube, const Waveform& w, double s) {
    const double ft = tilde_f(w, s);
    std::vector<double> out(static_cast<std::size_t>(cube.detectors()));
    std::vector<double> tr;
    for (int iy = 0; iy < cube.nyd(); ++iy) {
        for (int ix = 0; ix < cube.nxd(); ++ix) {
            tr = cube.trace(ix, iy);
            out[static_cast<std::size_t>(iy) * cube.nxd() + ix] = laplace_transform(tr, cube.dt(), s, cube.t0()) / ft;
        }
    }
    return out;
}

ScalarField w_from_transform(const ScalarField& lu, const Waveform& w, double s, double floor,
                             PositivityReport* report) {
    const double ft = tilde_f(w, s);
    ScalarField out(lu.grid());
    std::size_t bad = 0;
    for (std::size_t n = 0; n < lu.size(); ++n) {
        double v = lu[n] / ft;
        if (!(v > 0.0)) {
            ++bad;
            if (floor <= 0.0) throw std::domain_error("w_from_transform: nonpositive w at node " + std::to_string(n));
            v = floor;
        }
        out[n] = v;
    }
    if (report) {
        report->nonpositive = bad;
        report->checked = lu.size();
    }
    return out;
}

ScalarField tail_from_w(const ScalarField& w, double s_bar) {
    if (!(s_bar > 0.0)) throw std::domain_error("tail_from_w: s must be positive");
    ScalarField v(w.grid());
    const double is2 = 1.0 / (s_bar * s_bar);
    for (std::size_t n = 0; n < w.size(); ++n) {
        if (!(w[n] > 0.0)) throw std::domain_error("tail_from_w: nonpositive w");
        v[n] = std::log(w[n]) * is2;
    }
    return v;
}

CompletedTraces complete_boundary_data(const TimeSeriesCube& measured, const BoundaryTraces& reference,
                                       Face measured_face) {
    if (measured_face != Face::ZMax && measured_face != Face::ZMin) {
        throw std::invalid_argument("complete_boundary_data: measured face must be a z face");
    }
    const Grid3D& og = reference.omega_grid;
    const double face_z = measured_face == Face::ZMax ? og.z(og.nz() - 1) : og.z(0);
    if (std::abs(measured.plane_z() - face_z) > 1e-9) {
        throw std::invalid_argument("complete_boundary_data: measured plane does not match the face");
    }
    if (measured.nt() != reference.nt || std::abs(measured.dt() - reference.dt) > 1e-12 ||
        std::abs(measured.t0()) > 1e-12) {
        throw std::invalid_argument("complete_boundary_data: time lattice mismatch");
    }
    CompletedTraces out;
    out.traces = reference;
    out.provenance.fill(FaceSource::Completed);
    out.provenance[static_cast<int>(measured_face)] = FaceSource::Measured;
    const std::size_t nb = reference.boundary.size();
    for (std::size_t b = 0; b < nb; ++b) {
        if (reference.boundary.face(b) != measured_face) continue;
        const auto ijk = og.unflatten(reference.boundary.node(b));
        const double x = og.x(ijk[0]), y = og.y(ijk[1]);
        const double rx = (x - measured.x0()) / measured.dx();
        const double ry = (y - measured.y0()) / measured.dy();
        const long ix = std::lround(rx), iy = std::lround(ry);
        if (std::abs(rx - ix) > 1e-6 || std::abs(ry - iy) > 1e-6 || ix < 0 || iy < 0 || ix >= measured.nxd() ||
            iy >= measured.nyd()) {
            throw std::invalid_argument("complete_boundary_data: detector grid does not cover the face (grid mismatch)");
        }
        for (int it = 0; it < reference.nt; ++it) {
            out.traces.values[static_cast<std::size_t>(it) * nb + b] =
                measured(static_cast<int>(ix), static_cast<int>(iy), it);
        }
    }
    return out;
}

void finish_psi(BoundaryData& bd, const std::vector<std::vector<char>>& valid) {
    const int M = static_cast<int>(bd.log_phi.size());
    const std::size_t nb = bd.boundary.size();
    const double h = bd.sgrid.h;
    for (int m = 0; m < M; ++m) {
        std::array<double, 6> sum{};
        std::array<std::size_t, 6> cnt{};
        for (std::size_t b = 0; b < nb; ++b) {
            if (!valid[m][b]) continue;
            const int f = static_cast<int>(bd.boundary.face(b));
            sum[f] += bd.log_phi[m][b];
            ++cnt[f];
        }
        for (std::size_t b = 0; b < nb; ++b) {
            if (valid[m][b]) continue;
            const int f = static_cast<int>(bd.boundary.face(b));
            if (cnt[f] == 0) throw std::domain_error("psi: a whole face has nonpositive phi");
            bd.log_phi[m][b] = sum[f] / cnt[f];
        }
    }
    auto sm = [&](int m) { return bd.sgrid.s_bar - (m - 1) * h; };
    std::vector<std::vector<double>> G(M, std::vector<double>(nb));
    for (int m = 0; m < M; ++m) {
        const double s = sm(m);
        for (std::size_t b = 0; b < nb; ++b) G[m][b] = bd.log_phi[m][b] / (s * s);
    }
    bd.psi.assign(M, std::vector<double>(nb));
    for (int m = 0; m < M; ++m) {
        for (std::size_t b = 0; b < nb; ++b) {
            // s decreases with m
            if (m == 0) bd.psi[m][b] = (G[0][b] - G[1][b]) / h;
            else if (m == M - 1) bd.psi[m][b] = (G[M - 2][b] - G[M - 1][b]) / h;
            else bd.psi[m][b] = (G[m - 1][b] - G[m + 1][b]) / (2.0 * h);
        }
    }
    const int N = bd.sgrid.N();
    bd.psi_bar.assign(N + 1, {});
    for (int n = 1; n <= N; ++n) {
        bd.psi_bar[n].resize(nb);
        const auto& a = bd.psi_at(n);
        const auto& c = bd.psi_at(n - 1);
        for (std::size_t b = 0; b < nb; ++b) bd.psi_bar[n][b] = 0.5 * (a[b] + c[b]);
    }
}

BoundaryData psi_from_boundary(const BoundaryTraces& g, const Waveform& w, const PseudoFrequencyGrid& sgrid,
                               const std::array<FaceSource, 6>& provenance) {
    sgrid.validate();
    BoundaryData bd;
    bd.omega_grid = g.omega_grid;
    bd.boundary = g.boundary;
    bd.sgrid = sgrid;
    bd.provenance = provenance;
    const int M = sgrid.N() + 3;
    const std::size_t nb = g.boundary.size();
    bd.log_phi.assign(M, std::vector<double>(nb));
    std::vector<std::vector<char>> valid(M, std::vector<char>(nb, 1));
    std::vector<char> node_ok(nb, 1);
    std::vector<double> ker(g.nt);
    for (int m = 0; m < M; ++m) {
        const double s = sgrid.s_bar - (m - 1) * sgrid.h;
        const double ft = tilde_f(w, s);
        for (int it = 0; it < g.nt; ++it) {
            const double wk = (it == 0 || it == g.nt - 1) ? 0.5 : 1.0;
            ker[it] = wk * g.dt * std::exp(-s * it * g.dt) / ft;
        }
        std::vector<double> phi(nb, 0.0);
        for (int it = 0; it < g.nt; ++it) {
            const double* row = g.values.data() + static_cast<std::size_t>(it) * nb;
            const double kv = ker[it];
            for (std::size_t b = 0; b < nb; ++b) phi[b] += kv * row[b];
        }
        for (std::size_t b = 0; b < nb; ++b) {
            if (phi[b] > 0.0 && std::isfinite(phi[b])) {
                bd.log_phi[m][b] = std::log(phi[b]);
            } else {
                node_ok[b] = 0;
            }
        }
    }
    for (std::size_t b = 0; b < nb; ++b) {
        if (node_ok[b]) continue;
        ++bd.rejected;
        for (int m = 0; m < M; ++m) valid[m][b] = 0;
    }
    if (bd.rejected * 100 > nb) {
        throw std::domain_error("psi_from_boundary: " + std::to_string(bd.rejected) + " of " + std::to_string(nb) +
                                " boundary nodes have nonpositive phi");
    }
    finish_psi(bd, valid);
    return bd;
}

BoundaryData psi_from_boundary(const CompletedTraces& g, const Waveform& w, const PseudoFrequencyGrid& sgrid) {
    return psi_from_boundary(g.traces, w, sgrid, g.provenance);
}

}  // namespace gcm
