#ifndef GCM_PREPROCESS_HPP
#define GCM_PREPROCESS_HPP

#include <string>
#include <vector>

#include "gcm/time_series.hpp"

namespace gcm {

TimeSeriesCube offset_correct(const TimeSeriesCube& cube);

/// Advance every trace so that t_emit maps to t = 0. Tail is zero padded.
TimeSeriesCube time_zero_correct(const TimeSeriesCube& cube, double t_emit);

/// out(t) = in(t + dz) for dz >= 0, delayed for dz < 0. Non-integer sample
/// shifts use linear interpolation.
TimeSeriesCube shift_source(const TimeSeriesCube& cube, double dz);

TimeSeriesCube calibrate(const TimeSeriesCube& cube, double factor);

/// Peak |amplitude| ratio simulated/measured at the strongest detector of
/// the simulated cube.
double estimate_calibration_factor(const TimeSeriesCube& measured, const TimeSeriesCube& simulated);

struct FkOptions {
    int lateral_pad = 0;  ///< extra zero detectors on each side
    bool mirror = false;  ///< even lateral extension instead of zero padding
    double max_omega = 0.0;  ///< drop temporal frequencies above this (0 keeps all)
};

/// Back-propagate data recorded at plane b = cube.plane_z() to z = a <= b
/// through a homogeneous eps = 1 half space (f-k / Stolt phase shift).
TimeSeriesCube propagate_fk(const TimeSeriesCube& cube, double a, const FkOptions& opt = {});

struct Peak {
    int index = 0;
    double amplitude = 0.0;
    int sign = 0;
};

/// Local extrema with |amplitude| >= rel_floor * ref, ordered in time.
/// ref <= 0 means the trace's own max |amplitude|.
std::vector<Peak> find_peaks(const std::vector<double>& trace, double rel_floor = 0.05, double ref = 0.0);

struct DepthEstimate {
    bool found = false;
    std::string reason;
    int det_ix = 0, det_iy = 0;
    std::vector<Peak> peaks;      ///< peaks of the strongest detector
    int first_negative = -1;      ///< index into peaks
    int sand_peak = -1;           ///< index into peaks
    int target_peak = -1;         ///< index into peaks
    int main_peak = -1;           ///< strongest peak from the window end to target_peak + 3
    double delay = 0.0;           ///< t(target) - t(sand)
    double depth = 0.0;
};

struct DepthOptions {
    double n_sand = 2.0;
    double depth_factor = 1.0;
    double peak_floor = 0.05;
};

/// Depth from the delay between the sand reference peak and the main lobe
/// of the target wavelet, which starts at the first strengthening peak after
/// the four excluded ones.
DepthEstimate estimate_depth(const TimeSeriesCube& cube, const DepthOptions& opt = {});

enum class TargetKind { Strong, Weak, Missed };
const char* target_kind_name(TargetKind k);

struct TargetClassification {
    TargetKind kind = TargetKind::Missed;
    int det_ix = 0, det_iy = 0;
    std::vector<int> first_peak;  ///< per detector (iy * nxd + ix), -1 if none
    double depth = 0.0;
    int first_peak_sign = 0;
};

struct ExtractOptions {
    double max_weak_depth = 0.05;
    double peak_floor = 0.05;
};

struct Extraction {
    TargetClassification cls;
    TimeSeriesCube cube;
};

Extraction classify_and_extract(const TimeSeriesCube& cube, const DepthEstimate& depth,
                                const ExtractOptions& opt = {});

/// Detector order used for neighbor chaining: rings of growing Chebyshev
/// distance around (cx, cy), row-major inside each ring.
std::vector<std::pair<int, int>> ring_order(int nxd, int nyd, int cx, int cy);

struct CrossSection {
    int nxd = 0, nyd = 0;
    double x0 = 0, y0 = 0, dx = 0, dy = 0;
    std::vector<char> mask;  ///< iy * nxd + ix

    bool empty() const;
    bool contains(double x, double y) const;
    /// Covered physical extent (detector cells of width dx, dy).
    void bounds(double& xmin, double& xmax, double& ymin, double& ymax) const;
    void centroid(double& x, double& y) const;
    std::size_t count() const;
};

/// {|W| >= beta max|W|}, W the Laplace transform of each trace at s.
CrossSection estimate_cross_section(const TimeSeriesCube& cube, double s, double beta = 0.5);

}  // namespace gcm

#endif
