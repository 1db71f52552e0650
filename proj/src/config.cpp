#include "gcm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gcm {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> p)
    : std::runtime_error([&] {
          std::string m = "invalid configuration:";
          for (const auto& s : p) m += "\n  " + s;
          return m;
      }()),
      problems(std::move(p)) {}

namespace {

class Parser {
public:
    std::vector<std::string> errors;

    bool object(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
        if (!j.is_object()) {
            errors.push_back(path + ": expected an object");
            return false;
        }
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : j.items())
            if (!allowed.count(k)) errors.push_back(path + "." + k + ": unknown key");
        return true;
    }

    void num(const json& j, const char* key, const std::string& path, double& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) {
            errors.push_back(path + "." + key + ": expected a number");
            return;
        }
        out = j[key].get<double>();
    }
    void integer(const json& j, const char* key, const std::string& path, int& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer()) {
            errors.push_back(path + "." + key + ": expected an integer");
            return;
        }
        out = j[key].get<int>();
    }
    void u64(const json& j, const char* key, const std::string& path, std::uint64_t& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_unsigned()) {
            errors.push_back(path + "." + key + ": expected a non-negative integer");
            return;
        }
        out = j[key].get<std::uint64_t>();
    }
    void boolean(const json& j, const char* key, const std::string& path, bool& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_boolean()) {
            errors.push_back(path + "." + key + ": expected true or false");
            return;
        }
        out = j[key].get<bool>();
    }
    void str(const json& j, const char* key, const std::string& path, std::string& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_string()) {
            errors.push_back(path + "." + key + ": expected a string");
            return;
        }
        out = j[key].get<std::string>();
    }
    template <class E, class F>
    void enumeration(const json& j, const char* key, const std::string& path, E& out, F parse) {
        std::string s;
        if (!j.contains(key)) return;
        str(j, key, path, s);
        if (s.empty()) return;
        try {
            out = parse(s);
        } catch (const std::exception& e) {
            errors.push_back(path + "." + key + ": " + e.what());
        }
    }
    void vec3(const json& j, const char* key, const std::string& path, Vec3& out) {
        if (!j.contains(key)) return;
        const json& a = j[key];
        if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() || !a[2].is_number()) {
            errors.push_back(path + "." + key + ": expected [x, y, z]");
            return;
        }
        out = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
    }
    void box(const json& j, const char* key, const std::string& path, Box& out) {
        if (!j.contains(key)) return;
        const std::string p = path + "." + key;
        if (!object(j[key], p, {"lo", "hi"})) return;
        vec3(j[key], "lo", p, out.lo);
        vec3(j[key], "hi", p, out.hi);
    }

    void waveform(const json& j, const std::string& p, Waveform& w) {
        if (!object(j, p, {"kind", "omega", "cycles", "amplitude"})) return;
        enumeration(j, "kind", p, w.kind, parse_waveform_kind);
        num(j, "omega", p, w.omega);
        num(j, "cycles", p, w.cycles);
        num(j, "amplitude", p, w.amplitude_scale);
    }

    void inclusion(const json& j, const std::string& p, Inclusion& inc) {
        if (!object(j, p, {"shape", "center", "size", "radius", "height", "axis", "eps"})) return;
        enumeration(j, "shape", p, inc.shape, parse_shape);
        vec3(j, "center", p, inc.center);
        vec3(j, "size", p, inc.size);
        num(j, "radius", p, inc.radius);
        num(j, "height", p, inc.height);
        integer(j, "axis", p, inc.axis);
        num(j, "eps", p, inc.eps);
    }
};

LateralBoundary parse_lateral(const std::string& s) {
    if (s == "mirror") return LateralBoundary::Mirror;
    if (s == "absorbing") return LateralBoundary::Absorbing;
    throw std::invalid_argument("unknown lateral boundary '" + s + "'");
}

const char* lateral_name(LateralBoundary b) { return b == LateralBoundary::Mirror ? "mirror" : "absorbing"; }

bool multiple_of(double len, double h) {
    const double r = len / h;
    return std::abs(r - std::round(r)) < 1e-6 && std::round(r) >= 1;
}

json vec(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json box_json(const Box& b) { return {{"lo", vec(b.lo)}, {"hi", vec(b.hi)}}; }
json waveform_json(const Waveform& w) {
    return {{"kind", waveform_kind_name(w.kind)}, {"omega", w.omega}, {"cycles", w.cycles},
            {"amplitude", w.amplitude_scale}};
}

}  // namespace

std::vector<std::string> RunConfig::validate() const {
    std::vector<std::string> e;
    const GeometryConfig& g = geometry;
    if (!(g.spacing > 0)) e.push_back("geometry.spacing: must be positive");
    for (int a = 0; a < 3; ++a) {
        const double glo = a == 0 ? g.G.lo.x : a == 1 ? g.G.lo.y : g.G.lo.z;
        const double ghi = a == 0 ? g.G.hi.x : a == 1 ? g.G.hi.y : g.G.hi.z;
        const double olo = a == 0 ? g.omega.lo.x : a == 1 ? g.omega.lo.y : g.omega.lo.z;
        const double ohi = a == 0 ? g.omega.hi.x : a == 1 ? g.omega.hi.y : g.omega.hi.z;
        const std::string ax = std::string(1, "xyz"[a]);
        if (!(ghi > glo)) e.push_back("geometry.G: empty along " + ax);
        if (!(ohi > olo)) e.push_back("geometry.omega: empty along " + ax);
        if (!(olo > glo && ohi < ghi)) e.push_back("geometry.omega: must lie strictly inside G along " + ax);
        if (g.spacing > 0) {
            if (!multiple_of(ghi - glo, g.spacing)) e.push_back("geometry.G: extent along " + ax + " is not a multiple of spacing");
            if (!multiple_of(olo - glo, g.spacing) || !multiple_of(ohi - olo, g.spacing))
                e.push_back("geometry.omega: faces along " + ax + " are not on grid planes");
        }
    }
    try {
        sim.validate();
    } catch (const std::exception& ex) {
        e.push_back(std::string("simulation: ") + ex.what());
    }
    const double cmax = 1.0 / std::sqrt(std::min(1.0, inversion.eps_lower > 0 ? inversion.eps_lower : 1.0));
    if (g.spacing > 0 && sim.dt > g.spacing / (std::sqrt(3.0) * cmax))
        e.push_back("simulation.dt: violates the CFL bound dx/(sqrt(3) c_max)");
    if (sim.source_z >= g.omega.lo.z - 1e-12 && sim.source_z <= g.omega.hi.z + 1e-12)
        e.push_back("simulation.source_z: source plane meets the closed inversion box");
    if (!(sim.source_z > g.G.lo.z && sim.source_z < g.G.hi.z)) e.push_back("simulation.source_z: outside G");
    try {
        waveform.validate();
    } catch (const std::exception& ex) {
        e.push_back(std::string("waveform: ") + ex.what());
    }
    if (!(sgrid.h > 0)) e.push_back("pseudo_frequency.h: must be positive");
    if (!(sgrid.s_under > 0)) e.push_back("pseudo_frequency.s_under: must be positive");
    if (!(sgrid.s_bar > sgrid.s_under)) e.push_back("pseudo_frequency: s_bar must exceed s_under");
    else if (sgrid.h > 0 && !multiple_of(sgrid.s_bar - sgrid.s_under, sgrid.h))
        e.push_back("pseudo_frequency: s_bar - s_under is not a multiple of h");
    if (!(inversion.lambda > 0)) e.push_back("inversion.lambda: must be positive");
    if (inversion.i_max < 1) e.push_back("inversion.i_max: must be at least 1");
    if (!(inversion.eps_lower > 0 && inversion.eps_lower <= 1)) e.push_back("inversion.eps_lower: must lie in (0, 1]");
    if (!(inversion.eps_u >= 1)) e.push_back("inversion.eps_u: must be at least 1");
    if (!(inversion.elliptic_tolerance > 0)) e.push_back("inversion.elliptic_tolerance: must be positive");
    if (!(inversion.gamma > 0 && inversion.gamma <= 1)) e.push_back("inversion.gamma: must lie in (0, 1]");
    if (!(preprocess.n_sand > 0)) e.push_back("preprocess.n_sand: must be positive");
    if (!(preprocess.depth_factor > 0)) e.push_back("preprocess.depth_factor: must be positive");
    if (!(preprocess.peak_floor >= 0 && preprocess.peak_floor < 1)) e.push_back("preprocess.peak_floor: must lie in [0, 1)");
    if (!(preprocess.beta > 0 && preprocess.beta <= 1)) e.push_back("preprocess.beta: must lie in (0, 1]");
    if (!(preprocess.cross_section_s > 0)) e.push_back("preprocess.cross_section_s: must be positive");
    if (!(preprocess.max_weak_depth > 0)) e.push_back("preprocess.max_weak_depth: must be positive");
    if (!(preprocess.miss_threshold >= 0)) e.push_back("preprocess.miss_threshold: must be non-negative");
    const MeasurementConfig& m = measurement;
    if (!(m.top_z > g.omega.hi.z)) e.push_back("measurement.top_z: must lie above the inversion box");
    else if (g.spacing > 0 && !multiple_of(m.top_z - g.G.lo.z, g.spacing))
        e.push_back("measurement.top_z: not on a grid plane");
    if (!(m.source_z > g.omega.hi.z && m.source_z < m.top_z)) e.push_back("measurement.source_z: must lie between the inversion box and top_z");
    if (!(m.plane_z > g.omega.hi.z && m.plane_z < m.top_z)) e.push_back("measurement.plane_z: must lie between the inversion box and top_z");
    if (!(m.T > 0)) e.push_back("measurement.T: must be positive");
    const TwoLayerConfig& t = two_layer;
    if (!(t.spacing > 0)) e.push_back("two_layer.spacing: must be positive");
    if (!(t.dt > 0 && t.T > 0)) e.push_back("two_layer: dt and T must be positive");
    if (t.spacing > 0 && t.dt > t.spacing / std::sqrt(3.0)) e.push_back("two_layer.dt: violates the CFL bound");
    if (!(t.source_z < t.domain.hi.z && t.plane_z < t.domain.hi.z && t.source_z > t.domain.lo.z))
        e.push_back("two_layer: source and recording planes must lie inside the domain");
    if (const auto& hs = experiment.scene.half_space) {
        if (!(hs->surface_z > t.domain.lo.z && hs->surface_z < t.source_z && hs->surface_z < t.plane_z))
            e.push_back("experiment.scene.half_space.surface_z: must lie inside the domain below both planes");
        if (!(hs->eps >= 1)) e.push_back("experiment.scene.half_space.eps: must be at least 1");
    }
    try {
        t.waveform.validate();
    } catch (const std::exception& ex) {
        e.push_back(std::string("two_layer.waveform: ") + ex.what());
    }
    const ExperimentConfig& x = experiment;
    if (!(x.noise >= 0)) e.push_back("experiment.noise: must be non-negative");
    if (!(x.calibration_distortion > 0)) e.push_back("experiment.calibration_distortion: must be positive");
    if (!(x.time_offset >= 0 && x.time_offset < m.T)) e.push_back("experiment.time_offset: must lie in [0, measurement.T)");
    if (!(x.eps_sand > 0)) e.push_back("experiment.eps_sand: must be positive");
    for (std::size_t i = 0; i < x.scene.inclusions.size(); ++i) {
        const Inclusion& inc = x.scene.inclusions[i];
        const std::string p = "experiment.scene.inclusions[" + std::to_string(i) + "]";
        if (!(inc.eps > 0)) e.push_back(p + ".eps: must be positive");
        if (inc.axis < 0 || inc.axis > 2) e.push_back(p + ".axis: must be 0, 1 or 2");
        if (inc.shape == Shape::Box && !(inc.size.x > 0 && inc.size.y > 0 && inc.size.z > 0))
            e.push_back(p + ".size: box edges must be positive");
        if (inc.shape != Shape::Box && !(inc.radius > 0)) e.push_back(p + ".radius: must be positive");
        if (inc.shape == Shape::Cylinder && !(inc.height > 0)) e.push_back(p + ".height: must be positive");
    }
    return e;
}

InversionConfig RunConfig::inversion_config() const {
    InversionConfig c;
    c.sgrid = sgrid;
    c.lambda = inversion.lambda;
    c.stopping.mode = inversion.mode;
    c.stopping.i_max = inversion.i_max;
    c.tail.mode = inversion.tail_mode;
    c.tail.sim = sim;
    c.tail.waveform = waveform;
    c.eps_lower = inversion.eps_lower;
    c.eps_u = inversion.eps_u;
    c.elliptic_tolerance = inversion.elliptic_tolerance;
    c.outer_stopping = inversion.outer_stopping;
    return c;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    Parser P;
    json root;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        root = json::object();
    } else {
        try {
            root = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError({std::string("syntax error: ") + e.what()});
        }
    }
    if (!P.object(root, "config", {"geometry", "simulation", "waveform", "pseudo_frequency", "inversion", "preprocess",
                                   "measurement", "two_layer", "experiment", "seed"}))
        throw ConfigError(P.errors);

    if (root.contains("geometry") && P.object(root["geometry"], "geometry", {"G", "omega", "spacing"})) {
        const json& j = root["geometry"];
        P.box(j, "G", "geometry", c.geometry.G);
        P.box(j, "omega", "geometry", c.geometry.omega);
        P.num(j, "spacing", "geometry", c.geometry.spacing);
    }
    if (root.contains("simulation") && P.object(root["simulation"], "simulation", {"T", "dt", "source_z", "lateral"})) {
        const json& j = root["simulation"];
        P.num(j, "T", "simulation", c.sim.T);
        P.num(j, "dt", "simulation", c.sim.dt);
        P.num(j, "source_z", "simulation", c.sim.source_z);
        P.enumeration(j, "lateral", "simulation", c.sim.lateral, parse_lateral);
    }
    if (root.contains("waveform")) P.waveform(root["waveform"], "waveform", c.waveform);
    if (root.contains("pseudo_frequency") &&
        P.object(root["pseudo_frequency"], "pseudo_frequency", {"s_under", "s_bar", "h"})) {
        const json& j = root["pseudo_frequency"];
        P.num(j, "s_under", "pseudo_frequency", c.sgrid.s_under);
        P.num(j, "s_bar", "pseudo_frequency", c.sgrid.s_bar);
        P.num(j, "h", "pseudo_frequency", c.sgrid.h);
    }
    bool have_imax = false, have_gamma = false;
    if (root.contains("inversion") &&
        P.object(root["inversion"], "inversion", {"mode", "tail_mode", "lambda", "i_max", "eps_lower", "eps_u",
                                                  "elliptic_tolerance", "outer_stopping", "gamma"})) {
        const json& j = root["inversion"];
        P.enumeration(j, "mode", "inversion", c.inversion.mode, parse_inversion_mode);
        P.enumeration(j, "tail_mode", "inversion", c.inversion.tail_mode, parse_tail_mode);
        P.num(j, "lambda", "inversion", c.inversion.lambda);
        P.integer(j, "i_max", "inversion", c.inversion.i_max);
        P.num(j, "eps_lower", "inversion", c.inversion.eps_lower);
        P.num(j, "eps_u", "inversion", c.inversion.eps_u);
        P.num(j, "elliptic_tolerance", "inversion", c.inversion.elliptic_tolerance);
        P.boolean(j, "outer_stopping", "inversion", c.inversion.outer_stopping);
        P.num(j, "gamma", "inversion", c.inversion.gamma);
        have_imax = j.contains("i_max");
        have_gamma = j.contains("gamma");
    }
    if (!have_imax) c.inversion.i_max = StoppingConfig::for_mode(c.inversion.mode).i_max;
    if (!have_gamma) c.inversion.gamma = c.inversion.mode == InversionMode::Test1 ? 0.7 : 0.6;
    if (root.contains("preprocess") &&
        P.object(root["preprocess"], "preprocess", {"n_sand", "depth_factor", "peak_floor", "max_weak_depth", "beta",
                                                    "cross_section_s", "miss_threshold", "calibrate"})) {
        const json& j = root["preprocess"];
        P.num(j, "n_sand", "preprocess", c.preprocess.n_sand);
        P.num(j, "depth_factor", "preprocess", c.preprocess.depth_factor);
        P.num(j, "peak_floor", "preprocess", c.preprocess.peak_floor);
        P.num(j, "max_weak_depth", "preprocess", c.preprocess.max_weak_depth);
        P.num(j, "beta", "preprocess", c.preprocess.beta);
        P.num(j, "cross_section_s", "preprocess", c.preprocess.cross_section_s);
        P.num(j, "miss_threshold", "preprocess", c.preprocess.miss_threshold);
        P.boolean(j, "calibrate", "preprocess", c.preprocess.calibrate);
    }
    if (root.contains("measurement") &&
        P.object(root["measurement"], "measurement", {"top_z", "source_z", "plane_z", "T"})) {
        const json& j = root["measurement"];
        P.num(j, "top_z", "measurement", c.measurement.top_z);
        P.num(j, "source_z", "measurement", c.measurement.source_z);
        P.num(j, "plane_z", "measurement", c.measurement.plane_z);
        P.num(j, "T", "measurement", c.measurement.T);
    }
    if (root.contains("two_layer") &&
        P.object(root["two_layer"], "two_layer", {"domain", "spacing", "dt", "T", "source_z", "plane_z", "waveform"})) {
        const json& j = root["two_layer"];
        P.box(j, "domain", "two_layer", c.two_layer.domain);
        P.num(j, "spacing", "two_layer", c.two_layer.spacing);
        P.num(j, "dt", "two_layer", c.two_layer.dt);
        P.num(j, "T", "two_layer", c.two_layer.T);
        P.num(j, "source_z", "two_layer", c.two_layer.source_z);
        P.num(j, "plane_z", "two_layer", c.two_layer.plane_z);
        if (j.contains("waveform")) P.waveform(j["waveform"], "two_layer.waveform", c.two_layer.waveform);
    }
    if (root.contains("experiment") &&
        P.object(root["experiment"], "experiment", {"id", "scene", "noise", "calibration_distortion", "time_offset",
                                                    "dc_offset", "eps_sand"})) {
        const json& j = root["experiment"];
        P.str(j, "id", "experiment", c.experiment.id);
        P.num(j, "noise", "experiment", c.experiment.noise);
        P.num(j, "calibration_distortion", "experiment", c.experiment.calibration_distortion);
        P.num(j, "time_offset", "experiment", c.experiment.time_offset);
        P.num(j, "dc_offset", "experiment", c.experiment.dc_offset);
        P.num(j, "eps_sand", "experiment", c.experiment.eps_sand);
        if (j.contains("scene") &&
            P.object(j["scene"], "experiment.scene", {"background_eps", "half_space", "inclusions"})) {
            const json& s = j["scene"];
            const std::string p = "experiment.scene";
            P.num(s, "background_eps", p, c.experiment.scene.background_eps);
            if (s.contains("half_space") && !s["half_space"].is_null() &&
                P.object(s["half_space"], p + ".half_space", {"surface_z", "eps"})) {
                HalfSpace hs;
                P.num(s["half_space"], "surface_z", p + ".half_space", hs.surface_z);
                P.num(s["half_space"], "eps", p + ".half_space", hs.eps);
                c.experiment.scene.half_space = hs;
            }
            if (s.contains("inclusions")) {
                if (!s["inclusions"].is_array()) {
                    P.errors.push_back(p + ".inclusions: expected an array");
                } else {
                    for (std::size_t i = 0; i < s["inclusions"].size(); ++i) {
                        Inclusion inc;
                        P.inclusion(s["inclusions"][i], p + ".inclusions[" + std::to_string(i) + "]", inc);
                        c.experiment.scene.inclusions.push_back(inc);
                    }
                }
            }
        }
    }
    P.u64(root, "seed", "config", c.seed);

    c.experiment.scene.omega = c.geometry.omega;
    c.experiment.scene.source_z = c.sim.source_z;
    c.experiment.scene.omega_freq = c.waveform.omega;
    auto more = c.validate();
    P.errors.insert(P.errors.end(), more.begin(), more.end());
    if (!P.errors.empty()) throw ConfigError(P.errors);
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open " + path});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json config_to_json(const RunConfig& c) {
    json inc = json::array();
    for (const Inclusion& i : c.experiment.scene.inclusions) {
        inc.push_back({{"shape", shape_name(i.shape)}, {"center", vec(i.center)}, {"size", vec(i.size)},
                       {"radius", i.radius}, {"height", i.height}, {"axis", i.axis}, {"eps", i.eps}});
    }
    json hs = nullptr;
    if (c.experiment.scene.half_space)
        hs = {{"surface_z", c.experiment.scene.half_space->surface_z}, {"eps", c.experiment.scene.half_space->eps}};
    return {
        {"geometry", {{"G", box_json(c.geometry.G)}, {"omega", box_json(c.geometry.omega)}, {"spacing", c.geometry.spacing}}},
        {"simulation", {{"T", c.sim.T}, {"dt", c.sim.dt}, {"source_z", c.sim.source_z}, {"lateral", lateral_name(c.sim.lateral)}}},
        {"waveform", waveform_json(c.waveform)},
        {"pseudo_frequency", {{"s_under", c.sgrid.s_under}, {"s_bar", c.sgrid.s_bar}, {"h", c.sgrid.h}}},
        {"inversion",
         {{"mode", inversion_mode_name(c.inversion.mode)}, {"tail_mode", tail_mode_name(c.inversion.tail_mode)},
          {"lambda", c.inversion.lambda}, {"i_max", c.inversion.i_max}, {"eps_lower", c.inversion.eps_lower},
          {"eps_u", c.inversion.eps_u}, {"elliptic_tolerance", c.inversion.elliptic_tolerance},
          {"outer_stopping", c.inversion.outer_stopping}, {"gamma", c.inversion.gamma}}},
        {"preprocess",
         {{"n_sand", c.preprocess.n_sand}, {"depth_factor", c.preprocess.depth_factor},
          {"peak_floor", c.preprocess.peak_floor}, {"max_weak_depth", c.preprocess.max_weak_depth},
          {"beta", c.preprocess.beta}, {"cross_section_s", c.preprocess.cross_section_s},
          {"miss_threshold", c.preprocess.miss_threshold}, {"calibrate", c.preprocess.calibrate}}},
        {"measurement",
         {{"top_z", c.measurement.top_z}, {"source_z", c.measurement.source_z}, {"plane_z", c.measurement.plane_z},
          {"T", c.measurement.T}}},
        {"two_layer",
         {{"domain", box_json(c.two_layer.domain)}, {"spacing", c.two_layer.spacing}, {"dt", c.two_layer.dt},
          {"T", c.two_layer.T}, {"source_z", c.two_layer.source_z}, {"plane_z", c.two_layer.plane_z},
          {"waveform", waveform_json(c.two_layer.waveform)}}},
        {"experiment",
         {{"id", c.experiment.id}, {"noise", c.experiment.noise},
          {"calibration_distortion", c.experiment.calibration_distortion}, {"time_offset", c.experiment.time_offset},
          {"dc_offset", c.experiment.dc_offset}, {"eps_sand", c.experiment.eps_sand},
          {"scene", {{"background_eps", c.experiment.scene.background_eps}, {"half_space", hs}, {"inclusions", inc}}}}},
        {"seed", c.seed},
    };
}

}  // namespace gcm
