#include "gcm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "gcm/fdtd.hpp"
#include "gcm/laplace.hpp"

namespace gcm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kOnsetFloor = 0.3;
constexpr double kBandLimit = 5.0;

SceneSpec empty_like(const SceneSpec& s) {
    SceneSpec e = s;
    e.inclusions.clear();
    e.half_space.reset();
    e.background_eps = 1.0;
    return e;
}

TimeSeriesCube record_plane(const AcquisitionSetup& a) {
    MediumModel m = rasterize_scene(a.scene, a.grid, 0.25, 100.0);
    RecordRequest rr;
    rr.planes = {a.plane_z};
    return run_fdtd(m, a.waveform, a.sim, rr).planes[0];
}

TimeSeriesCube subtract(const TimeSeriesCube& a, const TimeSeriesCube& b) {
    if (!a.same_shape(b) || a.nt() != b.nt()) throw std::invalid_argument("subtract: cube lattices differ");
    TimeSeriesCube out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

TimeSeriesCube first_samples(const TimeSeriesCube& c, int nt) {
    if (nt > c.nt()) throw std::invalid_argument("pipeline: record too short after the source shift");
    TimeSeriesCube out(c.nxd(), c.nyd(), nt, c.dt(), c.dx(), c.dy(), c.plane_z(), c.t0(), c.x0(), c.y0());
    std::copy_n(c.data().begin(), out.data().size(), out.data().begin());
    return out;
}

// detector with the largest trace energy
void loudest_detector(const TimeSeriesCube& c, int& bx, int& by) {
    double best = -1.0;
    bx = by = 0;
    for (int iy = 0; iy < c.nyd(); ++iy)
        for (int ix = 0; ix < c.nxd(); ++ix) {
            double e = 0.0;
            for (int it = 0; it < c.nt(); ++it) e += c(ix, iy, it) * c(ix, iy, it);
            if (e > best) {
                best = e;
                bx = ix;
                by = iy;
            }
        }
}

double top_of_inclusions(const SceneSpec& s) {
    double top = -std::numeric_limits<double>::max();
    for (const Inclusion& inc : s.inclusions) top = std::max(top, inc.bounding_box().hi.z);
    return top;
}

double field_extreme_prime(const ScalarField& eps, bool want_max) {
    const Grid3D& g = eps.grid();
    double v = want_max ? -std::numeric_limits<double>::max() : std::numeric_limits<double>::max();
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j)
            for (int k = 0; k < g.nz(); ++k)
                if (in_omega_prime(g, i, j, k)) v = want_max ? std::max(v, eps(i, j, k)) : std::min(v, eps(i, j, k));
    return v;
}

std::string fmt(double v, int prec = 4) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

}  // namespace

SceneKind scene_kind(const SceneSpec& scene) {
    return scene.half_space ? SceneKind::TwoLayer : SceneKind::InAirRatio;
}

AcquisitionSetup acquisition_setup(const RunConfig& cfg, const SceneSpec& scene) {
    AcquisitionSetup a;
    a.scene = scene;
    if (scene_kind(scene) == SceneKind::TwoLayer) {
        const TwoLayerConfig& t = cfg.two_layer;
        a.grid = build_grid(t.domain, t.spacing);
        a.scene.omega = Box{t.domain.lo, {t.domain.hi.x, t.domain.hi.y, std::min(t.source_z, t.plane_z) - t.spacing}};
        a.sim.T = t.T;
        a.sim.dt = t.dt;
        a.sim.source_z = t.source_z;
        a.sim.lateral = cfg.sim.lateral;
        a.waveform = t.waveform;
        a.plane_z = t.plane_z;
    } else {
        const Box& G = cfg.geometry.G;
        a.grid = build_grid(Box{G.lo, {G.hi.x, G.hi.y, cfg.measurement.top_z}}, cfg.geometry.spacing);
        a.scene.omega = cfg.geometry.omega;
        a.sim = cfg.sim;
        a.sim.T = cfg.measurement.T;
        a.sim.source_z = cfg.measurement.source_z;
        a.waveform = cfg.waveform;
        a.plane_z = cfg.measurement.plane_z;
    }
    a.scene.source_z = a.sim.source_z;
    return a;
}

TimeSeriesCube simulate_measurement_plane(const RunConfig& cfg, const SceneSpec& scene) {
    return record_plane(acquisition_setup(cfg, scene));
}

TimeSeriesCube apply_acquisition(const TimeSeriesCube& clean, const ExperimentConfig& x, std::uint64_t seed) {
    if (!(x.calibration_distortion > 0)) throw std::invalid_argument("acquisition: distortion must be positive");
    if (!(x.noise >= 0)) throw std::invalid_argument("acquisition: noise must be non-negative");
    double ss = 0.0;
    for (double v : clean.data()) ss += v * v;
    const double sigma = x.noise * std::sqrt(ss / std::max<std::size_t>(1, clean.data().size()));
    TimeSeriesCube out = clean;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (double& v : out.data()) {
        v = v / x.calibration_distortion + x.dc_offset;
        if (sigma > 0) v += sigma * nd(rng);
    }
    const int shift = static_cast<int>(std::llround(x.time_offset / clean.dt()));
    if (shift > 0) {
        if (shift >= clean.nt()) throw std::invalid_argument("acquisition: time offset exceeds the record");
        TimeSeriesCube d = out;
        for (int it = 0; it < clean.nt(); ++it)
            for (int iy = 0; iy < clean.nyd(); ++iy)
                for (int ix = 0; ix < clean.nxd(); ++ix) d(ix, iy, it) = it < shift ? x.dc_offset : out(ix, iy, it - shift);
        out = d;
    }
    return out;
}

TimeSeriesCube synthesize_measurement(const RunConfig& cfg, std::uint64_t seed) {
    return apply_acquisition(simulate_measurement_plane(cfg, cfg.experiment.scene), cfg.experiment, seed);
}

double true_depth(const RunConfig& cfg) {
    const SceneSpec& s = cfg.experiment.scene;
    if (s.inclusions.empty()) return kNaN;
    const double face = s.half_space ? s.half_space->surface_z : cfg.geometry.omega.hi.z;
    return face - top_of_inclusions(s);
}

PipelineResult run_pipeline(const RunConfig& cfg, const PipelineOptions& opt) {
    return run_pipeline(cfg, synthesize_measurement(cfg, cfg.seed), opt);
}

PipelineResult run_pipeline(const RunConfig& cfg, const TimeSeriesCube& raw, const PipelineOptions& opt) {
    PipelineResult res;
    PipelineArtifacts& art = res.artifacts;
    const ExperimentConfig& x = cfg.experiment;
    const SceneKind kind = scene_kind(x.scene);
    AcquisitionSetup acq = acquisition_setup(cfg, x.scene);
    acq.scene = empty_like(acq.scene);
    auto stage = [&](const char* name, const TimeSeriesCube& c) {
        if (opt.keep_stages) art.stages.emplace_back(name, c);
    };
    stage("raw", raw);

    // steps 1-2
    TimeSeriesCube cube = time_zero_correct(offset_correct(raw), x.time_offset);
    stage("time_zero", cube);

    // calibration against the empty-scene measurement
    const TimeSeriesCube incident = record_plane(acq);
    if (cfg.preprocess.calibrate) {
        const TimeSeriesCube cal_raw = apply_acquisition(incident, x, cfg.seed + 1);
        const TimeSeriesCube cal = time_zero_correct(offset_correct(cal_raw), x.time_offset);
        art.calibration_factor = estimate_calibration_factor(cal, offset_correct(incident));
        cube = calibrate(cube, art.calibration_factor);
        stage("calibrated", cube);
    }
    const TimeSeriesCube scattered_b = subtract(cube, offset_correct(incident));
    stage("scattered", scattered_b);

    FkOptions fk;
    fk.mirror = cfg.sim.lateral == LateralBoundary::Mirror;
    fk.max_omega = kBandLimit * acq.waveform.omega;

    ReportRow row;
    row.id = x.id;
    row.mode = inversion_mode_name(cfg.inversion.mode);
    row.depth_true = true_depth(cfg);
    row.eps_computed = row.n_computed = row.rel_error = kNaN;
    row.eps_true = kNaN;
    if (!x.scene.inclusions.empty())
        row.eps_true = x.scene.inclusions.front().eps * (kind == SceneKind::InAirRatio ? x.eps_sand : 1.0);

    if (kind == SceneKind::TwoLayer) {
        const TimeSeriesCube at_surface = propagate_fk(scattered_b, x.scene.half_space->surface_z, fk);
        stage("propagated", at_surface);
        DepthOptions dop{cfg.preprocess.n_sand, cfg.preprocess.depth_factor, cfg.preprocess.peak_floor};
        const DepthEstimate de = estimate_depth(at_surface, dop);
        art.depth_estimate = de;
        ExtractOptions eo{cfg.preprocess.max_weak_depth, cfg.preprocess.peak_floor};
        const Extraction ex = classify_and_extract(at_surface, de, eo);
        stage("extracted", ex.cube);
        art.kind = ex.cls.kind;
        art.first_peak_sign = ex.cls.first_peak_sign;
        art.depth = de.depth;
        art.gamma_t = estimate_cross_section(ex.cube, cfg.preprocess.cross_section_s, cfg.preprocess.beta);
        row.classification = target_kind_name(art.kind);
        row.depth_computed = art.kind == TargetKind::Missed ? kNaN : de.depth;
        if (art.kind != TargetKind::Missed || !x.scene.inclusions.empty()) res.rows.push_back(row);
        return res;
    }

    // in-air ratio scenes
    const Grid3D G = build_grid(cfg.geometry.G, cfg.geometry.spacing);
    const IndexBox ob = G.aligned_box(cfg.geometry.omega);
    const double a = cfg.geometry.omega.hi.z;
    const TimeSeriesCube scat_a = propagate_fk(scattered_b, a, fk);
    stage("propagated", scat_a);

    // incident wave at plane a in the acquisition geometry
    TimeSeriesCube inc_a;
    {
        MediumModel m = homogeneous_medium(acq.grid);
        RecordRequest rr;
        rr.planes = {a};
        inc_a = offset_correct(run_fdtd(m, acq.waveform, acq.sim, rr).planes[0]);
    }
    int dx, dy;
    loudest_detector(scat_a, dx, dy);
    const std::vector<double> st = scat_a.trace(dx, dy), it = inc_a.trace(dx, dy);
    double smax = 0.0, imax = 0.0;
    for (double v : st) smax = std::max(smax, std::abs(v));
    for (double v : it) imax = std::max(imax, std::abs(v));
    const bool detected = imax > 0 && smax >= cfg.preprocess.miss_threshold * imax;
    if (detected) {
        // first strong lobe of each trace; the two-way delay gives the depth
        const auto ps = find_peaks(st, kOnsetFloor), pi = find_peaks(it, kOnsetFloor);
        if (ps.empty() || pi.empty()) throw std::logic_error("pipeline: no peaks on a nonzero trace");
        art.depth = std::max(0.0, 0.5 * (ps.front().index - pi.front().index) * scat_a.dt());
        art.first_peak_sign = ps.front().sign * pi.front().sign;
        art.kind = art.first_peak_sign < 0 ? TargetKind::Strong : TargetKind::Weak;
        art.gamma_t = estimate_cross_section(scat_a, cfg.preprocess.cross_section_s, cfg.preprocess.beta);
    }
    row.classification = target_kind_name(art.kind);
    row.depth_computed = detected ? art.depth : kNaN;

    const bool want_row = detected || !x.scene.inclusions.empty();
    if (!opt.invert) {
        if (want_row) res.rows.push_back(row);
        return res;
    }

    // step 5: source shift, then the inversion geometry
    const double dz = cfg.measurement.source_z - cfg.sim.source_z;
    RecordRequest rr;
    rr.planes = {a};
    rr.boundary = ob;
    const FdtdResult ref = run_fdtd(homogeneous_medium(G), cfg.waveform, cfg.sim, rr);
    const TimeSeriesCube shifted = first_samples(shift_source(scat_a, dz), ref.planes[0].nt());
    stage("shifted", shifted);
    TimeSeriesCube total = ref.planes[0];
    if (!total.same_shape(shifted)) throw std::invalid_argument("pipeline: detector lattice differs from the grid");
    for (std::size_t i = 0; i < total.data().size(); ++i) total.data()[i] += shifted.data()[i];
    stage("gamma_p", total);

    const CompletedTraces ct = complete_boundary_data(total, *ref.boundary, Face::ZMax);
    InversionInputs in;
    in.data = psi_from_boundary(ct, cfg.waveform, cfg.sgrid);
    in.G = G;
    in.omega = ob;
    in.z_front = a - art.depth;
    if (detected) in.gamma_t = art.gamma_t;
    else in.gamma_t = CrossSection{};
    InversionConfig icfg = cfg.inversion_config();
    art.inversion = run_inversion(in, icfg);
    art.eps = art.inversion->eps;

    const bool weak = art.kind == TargetKind::Weak;
    const double ratio = field_extreme_prime(art.eps, !weak);
    const ShapeKind sk = weak ? ShapeKind::Weak : ShapeKind::Strong;
    art.eps_truncated = truncate_shape(art.eps, art.gamma_t, cfg.inversion.gamma, sk, 1.0);
    if (detected) {
        const TargetValue tv = target_ratio_to_epsilon(ratio, x.eps_sand);
        row.eps_computed = tv.eps;
        row.n_computed = tv.n;
        if (!x.scene.inclusions.empty()) row.rel_error = std::abs(row.eps_computed - row.eps_true) / row.eps_true;
    }
    if (want_row) res.rows.push_back(row);
    return res;
}

std::string csv_escape(const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string o = "\"";
    for (char c : f) {
        if (c == '"') o += '"';
        o += c;
    }
    return o + "\"";
}

MetricsTable metrics_table(const std::vector<ReportRow>& rows) {
    const std::vector<std::string> head = {"id", "mode", "class", "comp_depth", "true_depth",
                                           "comp_eps", "comp_n", "true_eps", "rel_error"};
    std::vector<std::vector<std::string>> cells;
    double sum = 0.0;
    int cnt = 0;
    for (const ReportRow& r : rows) {
        cells.push_back({r.id, r.mode, r.classification, fmt(r.depth_computed), fmt(r.depth_true),
                         fmt(r.eps_computed), fmt(r.n_computed), fmt(r.eps_true), fmt(r.rel_error)});
        if (!std::isnan(r.rel_error)) {
            sum += r.rel_error;
            ++cnt;
        }
    }
    if (cnt > 0) cells.push_back({"average", "", "", "", "", "", "", "", fmt(sum / cnt)});

    MetricsTable t;
    std::vector<std::size_t> width(head.size());
    for (std::size_t c = 0; c < head.size(); ++c) width[c] = head[c].size();
    for (const auto& r : cells)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    auto line = [&](const std::vector<std::string>& r) {
        std::string s;
        for (std::size_t c = 0; c < r.size(); ++c) {
            s += r[c];
            if (c + 1 < r.size()) s += std::string(width[c] - r[c].size() + 2, ' ');
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s + "\n";
    };
    auto csv_line = [](const std::vector<std::string>& r) {
        std::string s;
        for (std::size_t c = 0; c < r.size(); ++c) s += (c ? "," : "") + csv_escape(r[c]);
        return s + "\r\n";
    };
    t.text = line(head);
    t.csv = csv_line(head);
    for (const auto& r : cells) {
        t.text += line(r);
        t.csv += csv_line(r);
    }
    return t;
}

}  // namespace gcm
