#ifndef GCM_LAPLACE_HPP
#define GCM_LAPLACE_HPP

#include <array>
#include <span>
#include <vector>

#include "gcm/fdtd.hpp"
#include "gcm/grid.hpp"
#include "gcm/time_series.hpp"
#include "gcm/waveform.hpp"

namespace gcm {

/// s_bar = s_0 > s_1 > ... > s_N = s_under, step h.
struct PseudoFrequencyGrid {
    double s_under = 7.0;
    double s_bar = 9.0;
    double h = 0.05;

    void validate() const;
    int N() const;
    double s(int n) const { return s_bar - n * h; }
};

/// Trapezoid quadrature of int u(t) e^{-st} dt for samples u(t0 + k dt).
double laplace_transform(std::span<const double> series, double dt, double s, double t0 = 0.0);

/// exp(-s|z - z0|) / (2s)
double compute_w0(double z, double z0, double s);

/// ln(w0)/s^2 and its s-derivative.
double v0_exact(double z, double z0, double s);
double dv0_ds_exact(double z, double z0, double s);

/// Per-detector w = L(u)/f~ on a cube.
std::vector<double> w_from_cube(const TimeSeriesCube& cube, const Waveform& w, double s);

struct PositivityReport {
    std::size_t nonpositive = 0;
    std::size_t checked = 0;
};

/// w = Lu / f~ for a field of accumulated transforms. Nodes with w <= 0
/// either throw (floor <= 0) or are clamped to `floor`.
ScalarField w_from_transform(const ScalarField& lu, const Waveform& w, double s, double floor = 0.0,
                             PositivityReport* report = nullptr);

/// V = ln(w)/s^2; throws on nonpositive w.
ScalarField tail_from_w(const ScalarField& w, double s_bar);

enum class FaceSource { Completed, Measured };

/// Laplace-domain boundary data on the boundary of Omega.
/// psi[m] lives at s = s_bar - (m - 1) h for m = 0..N+2 (the s-grid extended
/// by one step at each end); psi at s_n is psi_at(n). psi_bar[n] (n >= 1) is
/// the interval average over (s_n, s_{n-1}).
struct BoundaryData {
    Grid3D omega_grid;
    BoxBoundary boundary{Grid3D(2, 2, 2, 1, 1, 1, {})};
    PseudoFrequencyGrid sgrid;
    std::array<FaceSource, 6> provenance{FaceSource::Completed, FaceSource::Completed, FaceSource::Completed,
                                         FaceSource::Completed, FaceSource::Completed, FaceSource::Completed};
    std::vector<std::vector<double>> log_phi;  ///< ln phi on the extended s-grid
    std::vector<std::vector<double>> psi;      ///< on the extended s-grid
    std::vector<std::vector<double>> psi_bar;  ///< index 0 unused
    std::size_t rejected = 0;

    const std::vector<double>& psi_at(int n) const { return psi[n + 1]; }
    const std::vector<double>& log_phi_at(int n) const { return log_phi[n + 1]; }
};

/// Boundary traces where one face is replaced by measured data. The
/// measured cube's detectors must cover the face nodes.
struct CompletedTraces {
    BoundaryTraces traces;
    std::array<FaceSource, 6> provenance{};
};

CompletedTraces complete_boundary_data(const TimeSeriesCube& measured, const BoundaryTraces& reference,
                                       Face measured_face = Face::ZMax);

/// psi = d/ds [ln(phi)/s^2] with phi = L(g)/f~, central differences in s.
BoundaryData psi_from_boundary(const BoundaryTraces& g, const Waveform& w, const PseudoFrequencyGrid& sgrid,
                               const std::array<FaceSource, 6>& provenance = {});

BoundaryData psi_from_boundary(const CompletedTraces& g, const Waveform& w, const PseudoFrequencyGrid& sgrid);

/// psi from ln(phi) sampled on the extended s-grid (rows = s values).
/// Nodes flagged invalid are replaced with the mean over valid nodes of
/// the same face.
void finish_psi(BoundaryData& bd, const std::vector<std::vector<char>>& valid);

}  // namespace gcm

#endif
