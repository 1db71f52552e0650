#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcm/config.hpp"
#include "gcm/harness.hpp"
#include "gcm/io.hpp"

namespace fs = std::filesystem;
using namespace gcm;

namespace {

struct Common {
    std::string config;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> dump;
};

RunConfig load(const Common& c) {
    RunConfig cfg = c.config.empty() ? parse_config_text("") : parse_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << s;
}

void echo(const Common& c, const RunConfig& cfg) {
    fs::create_directories(c.out_dir);
    write_text(fs::path(c.out_dir) / "resolved_config.json", config_to_json(cfg).dump(2) + "\n");
}

void dump_stages(const Common& c, const PipelineArtifacts& art) {
    for (const std::string& name : c.dump) {
        bool found = false;
        for (const auto& [stage, cube] : art.stages)
            if (stage == name) {
                write_cube((fs::path(c.out_dir) / ("stage_" + name + ".gcmc")).string(), cube);
                found = true;
            }
        if (!found) throw std::runtime_error("no stage named '" + name + "' in this run");
    }
}

nlohmann::json summary(const PipelineResult& r) {
    const PipelineArtifacts& a = r.artifacts;
    nlohmann::json j;
    j["classification"] = target_kind_name(a.kind);
    j["depth"] = a.kind == TargetKind::Missed ? nlohmann::json(nullptr) : nlohmann::json(a.depth);
    j["calibration_factor"] = a.calibration_factor;
    j["cross_section_cells"] = a.gamma_t.count();
    if (a.inversion) {
        const InversionReport& rep = *a.inversion;
        j["n_stop"] = rep.n_stop;
        j["d_outer"] = rep.d_outer;
        j["eps_min"] = rep.eps.min();
        j["eps_max"] = rep.eps.max();
        j["warnings"] = rep.warnings;
    }
    return j;
}

std::string iterate_csv(const InversionReport& rep) {
    std::string s = "n,i,D,eps_min,eps_max,eps_min_prime,eps_max_prime,elliptic_iterations,elliptic_converged\r\n";
    char buf[256];
    for (const IterateRecord& r : rep.iterates) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\r\n", r.n, r.i, r.D, r.eps_min,
                      r.eps_max, r.eps_min_prime, r.eps_max_prime, r.elliptic_iterations, r.elliptic_converged ? 1 : 0);
        s += buf;
    }
    return s;
}

void write_outputs(const Common& c, const PipelineResult& r) {
    const fs::path dir(c.out_dir);
    write_text(dir / "summary.json", summary(r).dump(2) + "\n");
    const MetricsTable t = metrics_table(r.rows);
    write_text(dir / "report.csv", t.csv);
    std::cout << t.text;
    if (r.artifacts.inversion) {
        write_text(dir / "iterates.csv", iterate_csv(*r.artifacts.inversion));
        write_field((dir / "eps.gcmf").string(), r.artifacts.eps);
        write_field((dir / "eps_truncated.gcmf").string(), r.artifacts.eps_truncated);
    }
    dump_stages(c, r.artifacts);
}

void add_common(CLI::App* sub, Common& c, bool with_dump) {
    sub->add_option("--config", c.config, "JSON configuration (defaults when omitted)");
    sub->add_option("--out-dir", c.out_dir, "directory for outputs");
    sub->add_option("--seed", c.seed, "noise seed (overrides the configuration)");
    if (with_dump) sub->add_option("--dump-stage", c.dump, "write the named preprocessing stage as a cube");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layer-stripping inversion of backscatter data for the 3-D scalar wave equation"};
    app.require_subcommand(1);

    Common sim_c, pre_c, inv_c, pipe_c, rep_c;
    std::string sim_out, pre_in, inv_in;
    bool sim_clean = false;
    std::vector<std::string> rep_configs;

    auto* sim = app.add_subcommand("simulate", "synthesize a raw measurement cube");
    add_common(sim, sim_c, false);
    sim->add_option("--out", sim_out, "output cube")->required();
    sim->add_flag("--clean", sim_clean, "skip noise, distortion and time offset");

    auto* pre = app.add_subcommand("preprocess", "preprocess a raw cube (no inversion)");
    add_common(pre, pre_c, true);
    pre->add_option("--in", pre_in, "raw cube")->required()->check(CLI::ExistingFile);

    auto* inv = app.add_subcommand("invert", "preprocess and invert a raw cube");
    add_common(inv, inv_c, true);
    inv->add_option("--in", inv_in, "raw cube")->required()->check(CLI::ExistingFile);

    auto* pipe = app.add_subcommand("pipeline", "synthesize, preprocess and invert one experiment");
    add_common(pipe, pipe_c, true);

    auto* rep = app.add_subcommand("report", "run several experiments and tabulate them");
    rep->add_option("--out-dir", rep_c.out_dir, "directory for outputs");
    rep->add_option("--seed", rep_c.seed, "noise seed for every experiment");
    rep->add_option("configs", rep_configs, "experiment configurations")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const RunConfig cfg = load(sim_c);
            echo(sim_c, cfg);
            const TimeSeriesCube c = sim_clean ? simulate_measurement_plane(cfg, cfg.experiment.scene)
                                               : synthesize_measurement(cfg, cfg.seed);
            write_cube(sim_out, c);
        } else if (*pre || *inv) {
            Common& c = *pre ? pre_c : inv_c;
            const RunConfig cfg = load(c);
            echo(c, cfg);
            PipelineOptions po;
            po.invert = static_cast<bool>(*inv);
            po.keep_stages = true;
            const PipelineResult r = run_pipeline(cfg, read_cube(*pre ? pre_in : inv_in), po);
            write_outputs(c, r);
        } else if (*pipe) {
            const RunConfig cfg = load(pipe_c);
            echo(pipe_c, cfg);
            PipelineOptions po;
            po.keep_stages = !pipe_c.dump.empty();
            write_outputs(pipe_c, run_pipeline(cfg, po));
        } else if (*rep) {
            fs::create_directories(rep_c.out_dir);
            std::vector<ReportRow> rows;
            for (const std::string& path : rep_configs) {
                RunConfig cfg = parse_config(path);
                if (rep_c.seed) cfg.seed = *rep_c.seed;
                const PipelineResult r = run_pipeline(cfg);
                if (r.rows.empty()) {
                    ReportRow none;
                    none.id = cfg.experiment.id;
                    none.mode = inversion_mode_name(cfg.inversion.mode);
                    none.classification = "none";
                    none.depth_computed = none.depth_true = none.eps_computed = none.n_computed = none.eps_true =
                        none.rel_error = std::numeric_limits<double>::quiet_NaN();
                    rows.push_back(none);
                }
                rows.insert(rows.end(), r.rows.begin(), r.rows.end());
            }
            const MetricsTable t = metrics_table(rows);
            write_text(fs::path(rep_c.out_dir) / "report.csv", t.csv);
            std::cout << t.text;
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
