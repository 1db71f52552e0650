#ifndef GCM_CONFIG_HPP
#define GCM_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcm/fdtd.hpp"
#include "gcm/grid.hpp"
#include "gcm/inversion.hpp"
#include "gcm/laplace.hpp"
#include "gcm/preprocess.hpp"
#include "gcm/scene.hpp"
#include "gcm/waveform.hpp"

namespace gcm {

/// Simulation box G, inversion box Omega and the mesh step.
struct GeometryConfig {
    Box G{{-0.5, -0.5, -0.3}, {0.5, 0.5, 0.3}};
    Box omega{{-0.4, -0.4, -0.2}, {0.4, 0.4, 0.04}};
    double spacing = 0.02;
};

/// Acquisition geometry of the in-air scenes: G extended upward to top_z,
/// source plane and recording plane above Omega.
struct MeasurementConfig {
    double top_z = 0.5;
    double source_z = 0.3;
    double plane_z = 0.44;
    double T = 1.6;
};

/// Fine-grid sand scenes used for depth estimation and target extraction.
/// The sand itself is the scene's half space.
struct TwoLayerConfig {
    Box domain{{-0.08, -0.08, -0.12}, {0.08, 0.08, 0.08}};
    double spacing = 0.002;
    double dt = 0.001;
    double T = 0.5;
    double source_z = 0.05;
    double plane_z = 0.06;
    Waveform waveform{Waveform::Kind::HannBurst, 150.0, 2.0, 1.0};
};

struct PreprocessConfig {
    double n_sand = 2.0;
    double depth_factor = 1.0;
    double peak_floor = 0.05;
    double max_weak_depth = 0.05;
    double beta = 0.5;
    double cross_section_s = 8.0;
    double miss_threshold = 0.02;  ///< scattered/incident peak ratio below which nothing is detected
    bool calibrate = true;
};

struct InversionSection {
    InversionMode mode = InversionMode::Test1;
    TailMode tail_mode = TailMode::DirectS;
    double lambda = 20.0;
    int i_max = 8;
    double eps_lower = 1.0;
    double eps_u = 25.0;
    double elliptic_tolerance = 1e-8;
    bool outer_stopping = true;
    double gamma = 0.7;
};

struct ExperimentConfig {
    std::string id = "scene";
    SceneSpec scene;
    double noise = 0.0;                   ///< relative white noise
    double calibration_distortion = 1.0;  ///< measured = clean / distortion
    double time_offset = 0.0;             ///< emission time in the raw record
    double dc_offset = 0.0;               ///< constant added to every sample
    double eps_sand = 4.0;                ///< used to report target values
};

struct RunConfig {
    GeometryConfig geometry;
    SimConfig sim;
    Waveform waveform;
    PseudoFrequencyGrid sgrid;
    InversionSection inversion;
    PreprocessConfig preprocess;
    MeasurementConfig measurement;
    TwoLayerConfig two_layer;
    ExperimentConfig experiment;
    std::uint64_t seed = 1;

    /// Every schema violation, empty when valid.
    std::vector<std::string> validate() const;
    InversionConfig inversion_config() const;
};

struct ConfigError : std::runtime_error {
    std::vector<std::string> problems;
    explicit ConfigError(std::vector<std::string> p);
};

/// Parse JSON text. Missing keys take the defaults above; unknown keys and
/// invalid values are collected and thrown together.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Fully resolved configuration; parsing it back gives the same RunConfig.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace gcm

#endif
