// Acceptance runs. One PASS/FAIL line per criterion, details indented below.
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gcm/cwf.hpp"
#include "gcm/elliptic.hpp"
#include "gcm/fdtd.hpp"
#include "gcm/harness.hpp"
#include "gcm/inversion.hpp"
#include "gcm/laplace.hpp"
#include "gcm/preprocess.hpp"

using namespace gcm;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void need(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void info(const std::string& what) { notes.push_back("info " + what); }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double quad(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-15);
}

// 1
Outcome cwf_oracle() {
    Outcome o;
    double worst = 0.0;
    for (double sn : {7.0, 8.0, 9.0})
        for (double h : {0.05, 0.1})
            for (double lam : {10.0, 20.0, 50.0}) {
                const CwfCoefficients c = cwf_coefficients(sn, h, lam);
                auto wt = [&](double s) { return std::exp(-lam * (sn + h - s)); };
                const double I0 = quad(wt, sn, sn + h);
                const double a1 = quad([&](double s) { return (2 * s * s - 4 * s * (sn + h - s)) * wt(s); }, sn, sn + h) / I0;
                const double a2 = quad([&](double s) {
                    const double tau = sn + h - s;
                    return (2 * s * s * tau - 2 * s * tau * tau) * wt(s);
                }, sn, sn + h) / I0;
                const double a3 = quad([&](double s) { return -2 * s * wt(s); }, sn, sn + h) / I0;
                for (auto [x, y] : {std::pair{c.A1, a1}, {c.A2, a2}, {c.A3, a3}})
                    worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(y)));
            }
    o.need(worst <= 1e-10, fmt("closed form vs quadrature: max rel diff %.2e (tol 1e-10)", worst));
    for (double sn : {7.0, 9.0}) {
        const double r = cwf_coefficients(sn, 0.05, 20.0).A2 / cwf_coefficients(sn, 0.05, 200.0).A2;
        o.need(std::abs(r - 10.0) <= 2.0, fmt("A2(lambda=20)/A2(lambda=200) at s_n=%g: %.3f (want 10 +- 20%%)", sn, r));
    }
    return o;
}

// 2
Outcome homogeneous_identity() {
    Outcome o;
    const RunConfig cfg;
    const Grid3D G = build_grid(cfg.geometry.G, cfg.geometry.spacing);
    const IndexBox ob = G.aligned_box(cfg.geometry.omega);
    const Grid3D og = G.subgrid(ob);
    double worst = 0.0;
    for (double s : {7.0, 8.0, 9.0}) {
        ScalarField v(og);
        for (int i = 0; i < og.nx(); ++i)
            for (int j = 0; j < og.ny(); ++j)
                for (int k = 0; k < og.nz(); ++k) v(i, j, k) = v0_exact(og.z(k), cfg.sim.source_z, s);
        const EpsilonUpdate up = epsilon_from_v(v, s, cutoff_chi(og));
        for (double e : up.eps.values()) worst = std::max(worst, std::abs(e - 1.0));
    }
    o.need(worst <= 1e-10, fmt("analytic v0: max|eps-1| = %.2e (tol 1e-10)", worst));

    RecordRequest rr;
    rr.boundary = ob;
    const FdtdResult run = run_fdtd(homogeneous_medium(G), cfg.waveform, cfg.sim, rr);
    for (InversionMode mode : {InversionMode::Test1, InversionMode::Test2}) {
        RunConfig c = cfg;
        c.inversion.mode = mode;
        c.inversion.i_max = StoppingConfig::for_mode(mode).i_max;
        InversionInputs in{psi_from_boundary(*run.boundary, c.waveform, c.sgrid), G, ob, CrossSection{}, 0.0};
        const InversionReport rep = run_inversion(in, c.inversion_config());
        double dev = 0.0;
        for (const IterateRecord& r : rep.iterates)
            dev = std::max({dev, std::abs(r.eps_max_prime - 1.0), std::abs(r.eps_min_prime - 1.0)});
        o.need(dev <= 0.15, fmt("simulated eps=1 data, Test %g: max|eps-1| over %g iterates in Omega' = %.4f (tol 0.15)",
                                mode == InversionMode::Test1 ? 1 : 2, static_cast<double>(rep.iterates.size()), dev));
    }
    return o;
}

// 3
Outcome sandwich() {
    Outcome o;
    const RunConfig cfg;
    const Grid3D G = build_grid(cfg.geometry.G, cfg.geometry.spacing);
    SceneSpec sc;
    sc.omega = cfg.geometry.omega;
    Inclusion inc;
    inc.center = {0.05, -0.05, -0.05};
    inc.size = {0.1, 0.08, 0.06};
    inc.eps = 10.0;
    Inclusion ball;
    ball.shape = Shape::Sphere;
    ball.center = {-0.15, 0.1, -0.08};
    ball.radius = 0.05;
    ball.eps = 25.0;
    sc.inclusions = {inc, ball};
    const double eps_u = 25.0;
    RecordRequest rr;
    rr.laplace_s = {7.0, 8.0, 9.0};
    const FdtdResult run = run_fdtd(rasterize_scene(sc, G), cfg.waveform, cfg.sim, rr);
    for (std::size_t q = 0; q < rr.laplace_s.size(); ++q) {
        const double s = rr.laplace_s[q];
        const ScalarField w = w_from_transform(run.laplace[q], cfg.waveform, s);
        long n = 0, ok = 0;
        for (int i = 1; i < G.nx() - 1; ++i)
            for (int j = 1; j < G.ny() - 1; ++j)
                for (int k = 1; k < G.nz() - 1; ++k) {
                    const double d = std::abs(G.z(k) - cfg.sim.source_z);
                    const double w0 = std::exp(-s * d) / (2 * s);
                    const double wu = std::exp(-s * std::sqrt(eps_u) * d) / (2 * s * std::sqrt(eps_u));
                    ++n;
                    if (w(i, j, k) > wu && w(i, j, k) <= w0) ++ok;
                }
        const double frac = static_cast<double>(ok) / n;
        o.need(frac >= 0.995, fmt("s=%g: w_u < w <= w0 at %.4f of interior nodes (need 0.995)", s, frac));
    }
    return o;
}

// 4
double rel_l2(const TimeSeriesCube& p, const TimeSeriesCube& a) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        num += std::pow(p.data()[i] - a.data()[i], 2);
        den += a.data()[i] * a.data()[i];
    }
    return std::sqrt(num / den);
}

Outcome fk_checks() {
    Outcome o;
    {
        // upgoing plane pulse recorded at b = 0.2; at a = 0.05 it arrives 0.15 earlier
        const int nt = 600;
        const double dt = 0.002;
        TimeSeriesCube b(16, 16, nt, dt, 0.02, 0.02, 0.2), a = b;
        a.set_plane_z(0.05);
        auto pulse = [](double t) { return t > 0 && t < 2 * M_PI / 30 ? std::sin(30 * t) : 0.0; };
        for (int it = 0; it < nt; ++it)
            for (int d = 0; d < 256; ++d) {
                b(d % 16, d / 16, it) = pulse(it * dt - 0.5);
                a(d % 16, d / 16, it) = pulse(it * dt - 0.35);
            }
        FkOptions fo;
        fo.mirror = true;
        const double e = rel_l2(propagate_fk(b, 0.05, fo), a);
        o.need(e <= 0.02, fmt("plane-pulse advance by 0.15: rel L2 %.2e (tol 0.02)", e));
        const double id = rel_l2(propagate_fk(b, 0.2, fo), b);
        o.need(id <= 1e-12, fmt("b = a identity: rel L2 %.2e (round-off)", id));
    }
    {
        // small scatterer far below both planes, absorbing sides
        const double h = 0.01, L = 0.5, b = 0.2, a = 0.1;
        const Grid3D G = build_grid(Box{{-L, -L, -0.8}, {L, L, 0.5}}, h);
        SceneSpec sc;
        sc.omega = Box{{-0.2, -0.2, -0.75}, {0.2, 0.2, 0.09}};
        sc.source_z = 0.42;
        Inclusion inc;
        inc.center = {0, 0, -0.5};
        inc.size = {0.02, 0.02, 0.02};
        inc.eps = 4.0;
        sc.inclusions = {inc};
        Waveform w{Waveform::Kind::HannBurst, 30.0, 2.0, 1.0};
        SimConfig sim;
        sim.dt = 0.5 * h / std::sqrt(3.0);
        sim.T = 2.4;
        sim.source_z = 0.42;
        sim.lateral = LateralBoundary::Absorbing;
        RecordRequest rr;
        rr.planes = {b, a};
        const FdtdResult r1 = run_fdtd(rasterize_scene(sc, G), w, sim, rr);
        const FdtdResult r0 = run_fdtd(homogeneous_medium(G), w, sim, rr);
        TimeSeriesCube sb = r1.planes[0], sa = r1.planes[1];
        for (std::size_t i = 0; i < sb.data().size(); ++i) {
            sb.data()[i] -= r0.planes[0].data()[i];
            sa.data()[i] -= r0.planes[1].data()[i];
        }
        FkOptions fo;
        fo.lateral_pad = 40;
        fo.max_omega = 5 * w.omega;
        const TimeSeriesCube p = propagate_fk(sb, a, fo);
        // central detectors, direct arrival: first 5% crossing plus 1.5 pulse lengths
        auto central = [&](int d) { return std::abs(sa.x(d % sa.nxd())) <= 0.1 && std::abs(sa.y(d / sa.nxd())) <= 0.1; };
        const int nd = sa.detectors();
        double mx = 0;
        for (int it = 0; it < sa.nt(); ++it)
            for (int d = 0; d < nd; ++d)
                if (central(d)) mx = std::max(mx, std::abs(sa.data()[static_cast<std::size_t>(it) * nd + d]));
        int t0 = -1;
        for (int it = 0; it < sa.nt() && t0 < 0; ++it)
            for (int d = 0; d < nd; ++d)
                if (central(d) && std::abs(sa.data()[static_cast<std::size_t>(it) * nd + d]) > 0.05 * mx) t0 = it;
        const int t1 = std::min(sa.nt() - 1, t0 + static_cast<int>(1.5 * w.duration() / sa.dt()));
        double num = 0, den = 0;
        for (int it = t0; it <= t1; ++it)
            for (int d = 0; d < nd; ++d) {
                if (!central(d)) continue;
                const std::size_t i = static_cast<std::size_t>(it) * nd + d;
                num += std::pow(p.data()[i] - sa.data()[i], 2);
                den += sa.data()[i] * sa.data()[i];
            }
        const double e = std::sqrt(num / den);
        o.need(e <= 0.10, fmt("point scatterer, b=0.2 -> a=0.1: rel L2 %.4f on t in [%.3f, %.3f] (tol 0.10)", e,
                              t0 * sa.dt(), t1 * sa.dt()));
    }
    return o;
}

RunConfig cube_scene(double ratio, double top, InversionMode mode) {
    RunConfig cfg;
    Inclusion inc;
    inc.center = {0.0, 0.0, top - 0.03};
    inc.size = {0.06, 0.06, 0.06};
    inc.eps = ratio;
    cfg.experiment.scene.inclusions = {inc};
    cfg.experiment.id = "cube";
    cfg.experiment.noise = 0.01;
    cfg.experiment.calibration_distortion = 1.7;
    cfg.experiment.time_offset = 0.03;
    cfg.experiment.dc_offset = 0.02;
    cfg.inversion.mode = mode;
    cfg.inversion.i_max = StoppingConfig::for_mode(mode).i_max;
    cfg.inversion.gamma = mode == InversionMode::Test1 ? 0.7 : 0.6;
    return cfg;
}

// 5
Outcome strong_target() {
    Outcome o;
    for (InversionMode mode : {InversionMode::Test1, InversionMode::Test2}) {
        const RunConfig cfg = cube_scene(4.0, 0.0, mode);
        const PipelineResult r = run_pipeline(cfg);
        const int t = mode == InversionMode::Test1 ? 1 : 2;
        if (r.rows.empty()) {
            o.need(false, fmt("Test %g: no target reported", t));
            continue;
        }
        const ReportRow& row = r.rows.front();
        o.need(row.classification == "strong", fmt("Test %g: classified ", t) + row.classification);
        o.need(std::abs(row.depth_computed - row.depth_true) <= 0.02,
               fmt("Test %g: depth %.4f vs %.4f (tol 0.02)", t, row.depth_computed, row.depth_true));
        o.need(row.rel_error <= 0.20, fmt("Test %g: eps %.3f vs %.3f", t, row.eps_computed, row.eps_true) +
                                          fmt(", rel error %.3f (tol 0.20)", row.rel_error));
    }
    return o;
}

// 6
Outcome weak_target() {
    Outcome o;
    for (double depth : {0.03, 0.04, 0.06}) {
        RunConfig cfg;
        cfg.preprocess.depth_factor = 0.125;
        cfg.experiment.scene.half_space = HalfSpace{0.0, 4.0};
        Inclusion inc;
        inc.center = {0, 0, -depth - 0.02};
        inc.size = {0.06, 0.06, 0.04};
        inc.eps = 2.0;
        cfg.experiment.scene.inclusions = {inc};
        cfg.experiment.noise = 0.01;
        PipelineOptions opt;
        opt.invert = false;
        const PipelineResult r = run_pipeline(cfg, opt);
        const std::string kind = target_kind_name(r.artifacts.kind);
        if (depth < 0.05) {
            o.need(r.artifacts.kind == TargetKind::Weak && r.artifacts.first_peak_sign > 0,
                   fmt("sand scene, eps 2 at depth %.2f: ", depth) + kind +
                       fmt(", first peak sign %+g, depth %.4f", r.artifacts.first_peak_sign, r.artifacts.depth));
        } else {
            o.need(r.artifacts.kind == TargetKind::Missed, fmt("sand scene, eps 2 at depth %.2f: ", depth) + kind);
        }
    }
    const RunConfig cfg = cube_scene(0.5, 0.0, InversionMode::Test1);
    const PipelineResult r = run_pipeline(cfg);
    if (r.rows.empty()) {
        o.need(false, "in-air ratio 0.5 cube: nothing reported");
    } else {
        const ReportRow& row = r.rows.front();
        o.need(row.classification == "weak" && r.artifacts.first_peak_sign > 0,
               "in-air ratio 0.5 cube: " + row.classification + fmt(", relative first-peak sign %+g", r.artifacts.first_peak_sign));
        o.need(row.eps_computed < cfg.experiment.eps_sand,
               fmt("in-air ratio 0.5 cube: eps %.3f below background %.1f", row.eps_computed, cfg.experiment.eps_sand));
    }
    // not gating: the same scene with the lower clip relaxed
    RunConfig relaxed = cfg;
    relaxed.inversion.eps_lower = 0.25;
    const PipelineResult rr = run_pipeline(relaxed);
    if (!rr.rows.empty())
        o.info(fmt("with eps_lower 0.25: eps %.3f (true %.1f)", rr.rows.front().eps_computed, rr.rows.front().eps_true));
    return o;
}

// 7
double manufactured_error(int n) {
    const double h = 1.0 / (n - 1);
    const Grid3D g(n, n, n, h, h, h, {0, 0, 0});
    EllipticProblem p;
    p.grid = g;
    p.f = ScalarField(g);
    for (int a = 0; a < 3; ++a) p.b[a] = ScalarField(g, a == 0 ? 1.0 : 0.0);
    p.tolerance = 1e-12;
    ScalarField ex(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 q = g.node(i, j, k);
                // u = sin(pi x) sin(pi y) exp(z); lap u + u_x = (1 - 2 pi^2) u + u_x
                const double u = std::sin(M_PI * q.x) * std::sin(M_PI * q.y) * std::exp(q.z);
                ex(i, j, k) = u;
                p.f(i, j, k) = (1 - 2 * M_PI * M_PI) * u + M_PI * std::cos(M_PI * q.x) * std::sin(M_PI * q.y) * std::exp(q.z);
            }
    p.g = BoxBoundary(g).gather(ex);
    const EllipticResult r = solve_dirichlet(p);
    double e = 0;
    for (std::size_t m = 0; m < ex.size(); ++m) e = std::max(e, std::abs(ex[m] - r.u[m]));
    return e;
}

Outcome elliptic() {
    Outcome o;
    const double e1 = manufactured_error(9), e2 = manufactured_error(17), e3 = manufactured_error(33);
    const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
    o.need(std::abs(p1 - 2) <= 0.3 && std::abs(p2 - 2) <= 0.3,
           fmt("manufactured solution: errors %.2e %.2e %.2e", e1, e2, e3) + fmt(", orders %.3f %.3f (2 +- 0.3)", p1, p2));
    const Grid3D g(17, 17, 17, 1.0 / 16, 1.0 / 16, 1.0 / 16, {0, 0, 0});
    EllipticProblem p;
    p.grid = g;
    const BoxBoundary bb(g);
    p.g.resize(bb.size());
    for (std::size_t b = 0; b < bb.size(); ++b) {
        const Vec3 q = g.node(g.unflatten(bb.node(b))[0], g.unflatten(bb.node(b))[1], g.unflatten(bb.node(b))[2]);
        p.g[b] = std::cos(5 * q.x) * std::exp(2 * q.y) - q.z;
    }
    const EllipticResult r = solve_dirichlet(p);
    const double lo = *std::min_element(p.g.begin(), p.g.end()), hi = *std::max_element(p.g.begin(), p.g.end());
    o.need(r.u.min() >= lo - 1e-10 && r.u.max() <= hi + 1e-10,
           fmt("harmonic case: interior range [%.4f, %.4f] within boundary range", r.u.min(), r.u.max()) +
               fmt(" [%.4f, %.4f]", lo, hi));
    return o;
}

// 8
Outcome stopping() {
    Outcome o;
    StoppingConfig c1 = StoppingConfig::for_mode(InversionMode::Test1);
    StoppingConfig c2 = StoppingConfig::for_mode(InversionMode::Test2);
    struct Case {
        std::vector<double> d;
        const StoppingConfig* c;
        StopDecision want;
    };
    const std::vector<Case> inner = {
        {{5.0}, &c1, StopDecision::Continue},
        {{5.0, 4.0}, &c1, StopDecision::Continue},
        {{5.0, 4.0, 4.2}, &c1, StopDecision::StopInner},
        {{5.0, 4.0, 4.0}, &c1, StopDecision::StopInner},
        {{8, 7, 6, 5, 4, 3, 2}, &c1, StopDecision::Continue},
        {{8, 7, 6, 5, 4, 3, 2, 1}, &c1, StopDecision::StopInner},
        {{5, 4, 3, 2}, &c2, StopDecision::Continue},
        {{5, 4, 3, 2, 1}, &c2, StopDecision::StopInner},
    };
    int bad = 0;
    for (const Case& k : inner) bad += inner_stopping_check(k.d, *k.c) != k.want;
    o.need(bad == 0, fmt("inner rule: %g of %g decisions wrong", bad, static_cast<double>(inner.size())));
    const std::vector<std::pair<std::vector<double>, StopDecision>> outer = {
        {{3.0}, StopDecision::Continue},
        {{3.0, 2.0}, StopDecision::Continue},
        {{3.0, 2.0, 2.5}, StopDecision::StopOuter},
        {{3.0, 2.0, 1.0}, StopDecision::Continue},
        {{3.0, 2.0, 1.0, 1.5}, StopDecision::StopOuter},
        {{3.0, 3.5}, StopDecision::StopOuter},
    };
    bad = 0;
    for (const auto& [d, want] : outer) bad += outer_stopping_check(d) != want;
    o.need(bad == 0, fmt("outer rule: %g of %g decisions wrong", bad, static_cast<double>(outer.size())));
    return o;
}

// 9
Outcome determinism() {
    Outcome o;
    RunConfig cfg = cube_scene(4.0, 0.0, InversionMode::Test1);
    cfg.experiment.noise = 0.05;
    cfg.seed = 11;
    PipelineOptions opt;
    opt.keep_stages = true;
    const PipelineResult a = run_pipeline(cfg, opt), b = run_pipeline(cfg, opt);
    bool cubes = a.artifacts.stages.size() == b.artifacts.stages.size();
    for (std::size_t i = 0; cubes && i < a.artifacts.stages.size(); ++i)
        cubes = a.artifacts.stages[i].second.data() == b.artifacts.stages[i].second.data();
    o.need(cubes, fmt("%g stage cubes bit-identical", static_cast<double>(a.artifacts.stages.size())));
    bool d = a.artifacts.inversion.has_value() == b.artifacts.inversion.has_value();
    if (d && a.artifacts.inversion) {
        const auto &ia = a.artifacts.inversion->iterates, &ib = b.artifacts.inversion->iterates;
        d = ia.size() == ib.size();
        for (std::size_t i = 0; d && i < ia.size(); ++i) d = ia[i].D == ib[i].D;
        d = d && a.artifacts.eps.data() == b.artifacts.eps.data();
    }
    o.need(d, "D-traces and eps fields bit-identical");
    o.need(metrics_table(a.rows).csv == metrics_table(b.rows).csv, "reports identical");
    return o;
}

}  // namespace

int main() {
    struct Item {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Item items[] = {
        {1, "CWF coefficient oracle", cwf_oracle},
        {2, "homogeneous identity", homogeneous_identity},
        {3, "positivity sandwich", sandwich},
        {4, "f-k propagation", fk_checks},
        {5, "strong-target reconstruction", strong_target},
        {6, "weak-target rules", weak_target},
        {7, "elliptic solver", elliptic},
        {8, "stopping rules", stopping},
        {9, "determinism", determinism},
    };
    int failed = 0;
    for (const Item& it : items) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it.run();
        } catch (const std::exception& e) {
            o.need(false, std::string("exception: ") + e.what());
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %d %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", it.id, it.name, sec);
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of 9 criteria passed\n", 9 - failed);
    return failed ? 1 : 0;
}
