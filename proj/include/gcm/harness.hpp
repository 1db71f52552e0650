#ifndef GCM_HARNESS_HPP
#define GCM_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcm/config.hpp"
#include "gcm/inversion.hpp"
#include "gcm/preprocess.hpp"
#include "gcm/time_series.hpp"

namespace gcm {

enum class SceneKind { InAirRatio, TwoLayer };
SceneKind scene_kind(const SceneSpec& scene);

/// Grid and time stepping used to acquire a scene of the given kind.
struct AcquisitionSetup {
    Grid3D grid;
    SceneSpec scene;  ///< with the inversion box and source plane of the acquisition
    SimConfig sim;
    Waveform waveform;
    double plane_z = 0.0;
};
AcquisitionSetup acquisition_setup(const RunConfig& cfg, const SceneSpec& scene);

/// Noise-free recording of a scene at the measurement plane.
TimeSeriesCube simulate_measurement_plane(const RunConfig& cfg, const SceneSpec& scene);

/// Turns a clean recording into raw data: scale by 1/distortion, add the DC
/// offset and white noise of standard deviation noise * rms(clean), then
/// delay by the emission time.
TimeSeriesCube apply_acquisition(const TimeSeriesCube& clean, const ExperimentConfig& x, std::uint64_t seed);

TimeSeriesCube synthesize_measurement(const RunConfig& cfg, std::uint64_t seed);

struct ReportRow {
    std::string id;
    std::string mode;
    std::string classification;
    double depth_computed = 0.0;
    double depth_true = 0.0;
    double eps_computed = 0.0;  ///< NaN when no inversion was run
    double n_computed = 0.0;
    double eps_true = 0.0;
    double rel_error = 0.0;     ///< of eps, NaN when not available
};

struct PipelineArtifacts {
    std::vector<std::pair<std::string, TimeSeriesCube>> stages;
    TargetKind kind = TargetKind::Missed;
    double depth = 0.0;
    int first_peak_sign = 0;  ///< sand scenes: extracted first peak; in-air: relative to the incident
    double calibration_factor = 1.0;
    CrossSection gamma_t;
    std::optional<DepthEstimate> depth_estimate;
    std::optional<InversionReport> inversion;
    ScalarField eps;            ///< recovered ratio field on Omega
    ScalarField eps_truncated;
};

struct PipelineResult {
    std::vector<ReportRow> rows;
    PipelineArtifacts artifacts;
};

struct PipelineOptions {
    bool invert = true;
    bool keep_stages = false;
};

/// Raw data to report. In-air scenes: offset, time zero, calibration,
/// incident removal, f-k to the top of Omega, depth from the first-arrival delay, source
/// shift, boundary completion and inversion. Sand scenes: the same chain up
/// to f-k to the surface, then depth estimation and extraction.
PipelineResult run_pipeline(const RunConfig& cfg, const TimeSeriesCube& raw, const PipelineOptions& opt = {});
PipelineResult run_pipeline(const RunConfig& cfg, const PipelineOptions& opt = {});

struct MetricsTable {
    std::string text;
    std::string csv;
};

/// Aligned text and RFC 4180 CSV. A final row averages the relative errors
/// of the rows that have one.
MetricsTable metrics_table(const std::vector<ReportRow>& rows);

std::string csv_escape(const std::string& field);

/// Depth of the shallowest inclusion below the measured face (in-air) or the
/// sand surface.
double true_depth(const RunConfig& cfg);

}  // namespace gcm

#endif
