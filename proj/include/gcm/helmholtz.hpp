#ifndef GCM_HELMHOLTZ_HPP
#define GCM_HELMHOLTZ_HPP

#include "gcm/fdtd.hpp"
#include "gcm/grid.hpp"

namespace gcm {

struct HelmholtzOptions {
    double tolerance = 1e-10;
    int max_iterations = 20000;
};

/// Laplace-domain image of the forward scheme at a fixed s:
/// lap_h w - s^2 eps w = -delta_h(z - z0), with the Robin image of the
/// absorbing condition on z faces and the lateral treatment of cfg.
/// Returns w on the whole grid.
ScalarField solve_w_direct(const ScalarField& eps, double s, const SimConfig& cfg,
                           const HelmholtzOptions& opt = {});

}  // namespace gcm

#endif
