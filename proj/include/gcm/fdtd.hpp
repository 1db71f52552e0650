#ifndef GCM_FDTD_HPP
#define GCM_FDTD_HPP

#include <optional>
#include <vector>

#include "gcm/grid.hpp"
#include "gcm/scene.hpp"
#include "gcm/time_series.hpp"
#include "gcm/waveform.hpp"

namespace gcm {

enum class LateralBoundary { Mirror, Absorbing };

struct SimConfig {
    double T = 1.2;
    double dt = 0.0015;
    double source_z = 0.1;
    LateralBoundary lateral = LateralBoundary::Mirror;

    int steps() const;
    void validate() const;
};

/// u on every node of the boundary of an index box, for all time samples.
/// values[it * boundary.size() + b].
struct BoundaryTraces {
    Grid3D omega_grid;
    BoxBoundary boundary{Grid3D(2, 2, 2, 1, 1, 1, {})};
    int nt = 0;
    double dt = 0.0;
    std::vector<double> values;

    double at(int it, std::size_t b) const { return values[static_cast<std::size_t>(it) * boundary.size() + b]; }
    std::vector<double> trace(std::size_t b) const;
    std::size_t face_node_count(Face f) const;
};

struct RecordRequest {
    std::vector<double> planes;          ///< z coordinates of full xy planes to record
    std::optional<IndexBox> boundary;    ///< record the boundary of this index box
    std::vector<double> laplace_s;       ///< accumulate trapezoid Laplace transforms of u
};

struct FdtdResult {
    std::vector<TimeSeriesCube> planes;
    std::optional<BoundaryTraces> boundary;
    std::vector<ScalarField> laplace;    ///< one per laplace_s entry
    int steps = 0;
};

/// Explicit leapfrog for eps u_tt = lap u + delta(z - z0) f(t) with zero
/// initial data. z faces are first-order absorbing; lateral faces per cfg.
FdtdResult run_fdtd(const MediumModel& medium, const Waveform& w, const SimConfig& cfg,
                    const RecordRequest& record);

/// Boundary traces of an index box taken from a run (the box must have been
/// requested). Checks that the run recorded the same box.
const BoundaryTraces& record_boundary(const FdtdResult& run, const IndexBox& omega);

}  // namespace gcm

#endif
