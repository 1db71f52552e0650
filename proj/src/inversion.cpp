#include "gcm/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gcm/helmholtz.hpp"

namespace gcm {

const char* inversion_mode_name(InversionMode m) { return m == InversionMode::Test1 ? "test1" : "test2"; }

InversionMode parse_inversion_mode(const std::string& s) {
    if (s == "test1") return InversionMode::Test1;
    if (s == "test2") return InversionMode::Test2;
    throw std::invalid_argument("unknown inversion mode '" + s + "'");
}

const char* tail_mode_name(TailMode m) { return m == TailMode::DirectS ? "direct_s" : "time_domain"; }

TailMode parse_tail_mode(const std::string& s) {
    if (s == "direct_s") return TailMode::DirectS;
    if (s == "time_domain") return TailMode::TimeDomain;
    throw std::invalid_argument("unknown tail mode '" + s + "'");
}

StoppingConfig StoppingConfig::for_mode(InversionMode m) {
    return StoppingConfig{m, m == InversionMode::Test1 ? 8 : 5};
}

StopDecision inner_stopping_check(const std::vector<double>& d, const StoppingConfig& cfg) {
    if (d.empty()) throw std::invalid_argument("stopping check: empty sequence");
    for (double v : d)
        if (!std::isfinite(v)) throw std::invalid_argument("stopping check: non-finite D");
    const std::size_t i = d.size();
    if (i >= 2 && d[i - 1] >= d[i - 2]) return StopDecision::StopInner;
    if (static_cast<int>(i) >= cfg.i_max) return StopDecision::StopInner;
    return StopDecision::Continue;
}

StopDecision outer_stopping_check(const std::vector<double>& d) {
    if (d.empty()) throw std::invalid_argument("stopping check: empty sequence");
    for (double v : d)
        if (!std::isfinite(v)) throw std::invalid_argument("stopping check: non-finite D");
    const std::size_t n = d.size();
    if (n >= 2 && d[n - 1] > d[n - 2] && (n == 2 || d[n - 3] >= d[n - 2])) return StopDecision::StopOuter;
    return StopDecision::Continue;
}

namespace {
double ramp(int d) { return std::clamp((d - 1) / 2.0, 0.0, 1.0); }
int face_distance(int i, int n) { return std::min(i, n - 1 - i); }
}  // namespace

ScalarField cutoff_chi(const Grid3D& g) {
    ScalarField chi(g);
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j)
            for (int k = 0; k < g.nz(); ++k)
                chi(i, j, k) = ramp(face_distance(i, g.nx())) * ramp(face_distance(j, g.ny())) *
                               ramp(face_distance(k, g.nz()));
    return chi;
}

bool in_omega_prime(const Grid3D& g, int i, int j, int k) {
    return face_distance(i, g.nx()) >= 3 && face_distance(j, g.ny()) >= 3 && face_distance(k, g.nz()) >= 3;
}

std::array<ScalarField, 3> gradient(const ScalarField& f) {
    const Grid3D& g = f.grid();
    std::array<ScalarField, 3> out{ScalarField(g), ScalarField(g), ScalarField(g)};
    const int n[3] = {g.nx(), g.ny(), g.nz()};
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
            for (int k = 0; k < n[2]; ++k) {
                const int idx[3] = {i, j, k};
                for (int a = 0; a < 3; ++a) {
                    int lo[3] = {i, j, k}, hi[3] = {i, j, k};
                    double span = 2.0;
                    if (idx[a] == 0) {
                        hi[a] += 1;
                        span = 1.0;
                    } else if (idx[a] == n[a] - 1) {
                        lo[a] -= 1;
                        span = 1.0;
                    } else {
                        lo[a] -= 1;
                        hi[a] += 1;
                    }
                    out[a](i, j, k) = (f(hi[0], hi[1], hi[2]) - f(lo[0], lo[1], lo[2])) / (span * g.spacing(a));
                }
            }
    return out;
}

ScalarField epsilon_raw(const ScalarField& v, double s) {
    const Grid3D& g = v.grid();
    ScalarField e(g, 1.0);
    const double ix2 = 1.0 / (g.dx() * g.dx()), iy2 = 1.0 / (g.dy() * g.dy()), iz2 = 1.0 / (g.dz() * g.dz());
    for (int i = 1; i < g.nx() - 1; ++i)
        for (int j = 1; j < g.ny() - 1; ++j)
            for (int k = 1; k < g.nz() - 1; ++k) {
                const double c = v(i, j, k);
                const double lap = (v(i + 1, j, k) - 2 * c + v(i - 1, j, k)) * ix2 +
                                   (v(i, j + 1, k) - 2 * c + v(i, j - 1, k)) * iy2 +
                                   (v(i, j, k + 1) - 2 * c + v(i, j, k - 1)) * iz2;
                const double gx = (v(i + 1, j, k) - v(i - 1, j, k)) / (2 * g.dx());
                const double gy = (v(i, j + 1, k) - v(i, j - 1, k)) / (2 * g.dy());
                const double gz = (v(i, j, k + 1) - v(i, j, k - 1)) / (2 * g.dz());
                e(i, j, k) = lap + s * s * (gx * gx + gy * gy + gz * gz);
            }
    return e;
}

EpsilonUpdate epsilon_from_v(const ScalarField& v, double s_eval, const ScalarField& chi, double eps_lower) {
    if (!chi.grid().same_lattice(v.grid())) throw std::invalid_argument("epsilon_from_v: chi grid mismatch");
    EpsilonUpdate up{epsilon_raw(v, s_eval), ScalarField(v.grid())};
    for (std::size_t n = 0; n < v.size(); ++n) {
        double& e = up.eps[n];
        if (!std::isfinite(e)) throw std::runtime_error("epsilon_from_v: non-finite coefficient");
        e = std::max(e, eps_lower);
        up.eps_bar[n] = (1.0 - chi[n]) + chi[n] * e;
    }
    return up;
}

ScalarField update_v(const ScalarField& q, const ScalarField& qbar, const ScalarField& V, double h) {
    if (!q.grid().same_lattice(V.grid()) || !qbar.grid().same_lattice(V.grid())) {
        throw std::invalid_argument("update_v: grid mismatch");
    }
    ScalarField v(V.grid());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = -h * q[n] - qbar[n] + V[n];
    return v;
}

QSolveResult solve_qn(const ScalarField& V, const ScalarField& qbar, const std::vector<double>& psi_n,
                      const CwfCoefficients& c, double tolerance) {
    const Grid3D& g = V.grid();
    ScalarField P(g);
    for (std::size_t n = 0; n < P.size(); ++n) P[n] = V[n] - qbar[n];
    auto gP = gradient(P);
    EllipticProblem prob;
    prob.grid = g;
    prob.f = ScalarField(g);
    for (int a = 0; a < 3; ++a) prob.b[a] = ScalarField(g);
    for (std::size_t n = 0; n < P.size(); ++n) {
        double m2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            prob.b[a][n] = c.A1 * gP[a][n];
            m2 += gP[a][n] * gP[a][n];
        }
        prob.f[n] = c.A3 * m2;
    }
    prob.g = psi_n;
    prob.tolerance = tolerance;
    QSolveResult r;
    r.solve = solve_dirichlet(prob);
    r.q = r.solve.u;
    return r;
}

ScalarField tail_update(const ScalarField& eps_bar_omega, const Grid3D& G, const IndexBox& omega, double s_bar,
                        const TailConfig& cfg, ScalarField* w_out) {
    ScalarField eps(G, 1.0);
    eps.insert(omega, eps_bar_omega);
    ScalarField w;
    if (cfg.mode == TailMode::DirectS) {
        w = solve_w_direct(eps, s_bar, cfg.sim);
    } else {
        MediumModel m{eps, std::min(1.0, eps.min()), std::max(25.0, eps.max())};
        RecordRequest rr;
        rr.laplace_s = {s_bar};
        FdtdResult run = run_fdtd(m, cfg.waveform, cfg.sim, rr);
        w = w_from_transform(run.laplace[0], cfg.waveform, s_bar);
    }
    ScalarField wo = w.restrict_to(omega);
    if (w_out) *w_out = w;
    return tail_from_w(wo, s_bar);
}

ScalarField initial_tail_test1(const BoundaryData& bd, double tolerance) {
    const double sb = bd.sgrid.s_bar;
    EllipticProblem prob;
    prob.grid = bd.omega_grid;
    prob.g = bd.psi_at(0);
    for (double& v : prob.g) v *= -sb * sb;
    prob.tolerance = tolerance;
    EllipticResult r = solve_dirichlet(prob);
    if (!r.converged) throw std::runtime_error("initial_tail_test1: Laplace solve did not converge");
    ScalarField V = r.u;
    for (double& v : V.data()) v /= sb;
    return V;
}

Test2Init initial_tail_test2(const BoundaryData& bd, const CrossSection& gt, double z_front, const Grid3D& G,
                             const IndexBox& omega, const TailConfig& tail_cfg, double eps_u, double lateral_margin,
                             double depth_margin) {
    Test2Init out;
    const Grid3D& og = bd.omega_grid;
    out.eps0 = ScalarField(og, 1.0);
    if (gt.empty()) {
        out.fell_back = true;
        out.tail = initial_tail_test1(bd);
        return out;
    }
    double xmin, xmax, ymin, ymax;
    gt.bounds(xmin, xmax, ymin, ymax);
    // detector cell centres define x_t,min / x_t,max
    xmin += 0.5 * gt.dx;
    xmax -= 0.5 * gt.dx;
    ymin += 0.5 * gt.dy;
    ymax -= 0.5 * gt.dy;
    const double zlo = og.z(0), ztop = z_front + depth_margin;
    const double tol = 1e-9;
    for (int i = 0; i < og.nx(); ++i)
        for (int j = 0; j < og.ny(); ++j)
            for (int k = 0; k < og.nz(); ++k) {
                const Vec3 p = og.node(i, j, k);
                const bool in = p.x > xmin - lateral_margin + tol && p.x < xmax + lateral_margin - tol &&
                                p.y > ymin - lateral_margin + tol && p.y < ymax + lateral_margin - tol &&
                                p.z > zlo + tol && p.z < ztop - tol;
                if (in) out.eps0(i, j, k) = eps_u;
            }
    out.tail = tail_update(out.eps0, G, omega, bd.sgrid.s_bar, tail_cfg);
    return out;
}

double tail_misfit(const ScalarField& V, const BoundaryData& bd) {
    const double sb = bd.sgrid.s_bar;
    const auto& lp = bd.log_phi_at(0);
    const Grid3D& og = bd.omega_grid;
    int face = -1;
    for (int f = 0; f < 6; ++f)
        if (bd.provenance[f] == FaceSource::Measured) face = f;
    if (face < 0) face = static_cast<int>(Face::ZMax);
    double acc = 0.0;
    for (std::size_t b = 0; b < bd.boundary.size(); ++b) {
        if (static_cast<int>(bd.boundary.face(b)) != face) continue;
        const double d = V[bd.boundary.node(b)] - lp[b] / (sb * sb);
        acc += d * d;
    }
    const double cell = (face <= 1) ? og.dy() * og.dz() : (face <= 3 ? og.dx() * og.dz() : og.dx() * og.dy());
    return std::sqrt(acc * cell);
}

InversionReport run_inversion(const InversionInputs& in, const InversionConfig& cfg) {
    cfg.sgrid.validate();
    const BoundaryData& bd = in.data;
    const Grid3D& og = bd.omega_grid;
    if (og.nx() != in.omega.count(0) || og.ny() != in.omega.count(1) || og.nz() != in.omega.count(2)) {
        throw std::invalid_argument("run_inversion: boundary data grid does not match Omega");
    }
    if (std::abs(bd.sgrid.s_bar - cfg.sgrid.s_bar) > 1e-12 || std::abs(bd.sgrid.h - cfg.sgrid.h) > 1e-12 ||
        bd.sgrid.N() < cfg.sgrid.N()) {
        throw std::invalid_argument("run_inversion: boundary data s-grid does not match the configuration");
    }
    InversionReport rep;
    const double h = cfg.sgrid.h;
    const int N = cfg.sgrid.N();
    const ScalarField chi = cutoff_chi(og);

    ScalarField V;
    if (cfg.stopping.mode == InversionMode::Test2) {
        if (!in.gamma_t) throw std::invalid_argument("run_inversion: Test 2 needs a target cross section");
        Test2Init t2 = initial_tail_test2(bd, *in.gamma_t, in.z_front, in.G, in.omega, cfg.tail, cfg.eps_u);
        V = t2.tail;
        rep.test1_fallback = t2.fell_back;
        if (t2.fell_back) rep.warnings.push_back("empty target cross section; using the Test 1 tail");
    } else {
        V = initial_tail_test1(bd);
    }
    rep.initial_tail = V;

    ScalarField qbar(og, 0.0);
    ScalarField q_prev(og, 0.0);
    std::vector<ScalarField> eps_n, eps_bar_n;
    for (int n = 1; n <= N; ++n) {
        const double s_n = cfg.sgrid.s(n);
        const CwfCoefficients c = cwf_coefficients(s_n, h, cfg.lambda);
        std::vector<double> d_inner;
        ScalarField q = q_prev;
        ScalarField V_next = V;
        EpsilonUpdate eu;
        for (int i = 1;; ++i) {
            QSolveResult qs = solve_qn(V, qbar, bd.psi_bar[n], c, cfg.elliptic_tolerance);
            q = qs.q;
            const ScalarField v = update_v(q, qbar, V, h);
            eu = epsilon_from_v(v, s_n, chi, cfg.eps_lower);
            V_next = tail_update(eu.eps_bar, in.G, in.omega, cfg.sgrid.s_bar, cfg.tail);
            const double D = tail_misfit(V_next, bd);
            d_inner.push_back(D);
            IterateRecord rec;
            rec.n = n;
            rec.i = i;
            rec.D = D;
            rec.eps_min = eu.eps.min();
            rec.eps_max = eu.eps.max();
            rec.eps_max_prime = -std::numeric_limits<double>::max();
            rec.eps_min_prime = std::numeric_limits<double>::max();
            for (int a = 0; a < og.nx(); ++a)
                for (int b = 0; b < og.ny(); ++b)
                    for (int k = 0; k < og.nz(); ++k)
                        if (in_omega_prime(og, a, b, k)) {
                            rec.eps_max_prime = std::max(rec.eps_max_prime, eu.eps(a, b, k));
                            rec.eps_min_prime = std::min(rec.eps_min_prime, eu.eps(a, b, k));
                        }
            rec.elliptic_iterations = qs.solve.iterations;
            rec.elliptic_converged = qs.solve.converged;
            if (!qs.solve.converged) {
                rep.warnings.push_back("q solve not converged at n=" + std::to_string(n) + " i=" + std::to_string(i));
            }
            rep.iterates.push_back(rec);
            V = V_next;
            if (inner_stopping_check(d_inner, cfg.stopping) != StopDecision::Continue) break;
        }
        // q_n, eps_n from the last inner iterate; V_n = V_{n, m_n + 1}
        for (std::size_t k = 0; k < qbar.size(); ++k) qbar[k] += h * q[k];
        q_prev = q;
        eps_n.push_back(eu.eps);
        eps_bar_n.push_back(eu.eps_bar);
        if (cfg.keep_snapshots) rep.eps_history.push_back(eu.eps);
        rep.d_outer.push_back(cfg.stopping.mode == InversionMode::Test1 ? d_inner.front() : d_inner.back());
        if (cfg.outer_stopping && outer_stopping_check(rep.d_outer) == StopDecision::StopOuter) {
            rep.n_stop = n - 1;
            break;
        }
        rep.n_stop = n;
    }
    rep.eps = eps_n[rep.n_stop - 1];
    rep.eps_bar = eps_bar_n[rep.n_stop - 1];
    return rep;
}

TargetValue target_ratio_to_epsilon(double ratio, double eps_sand) {
    TargetValue t;
    t.eps = ratio * eps_sand;
    t.n = std::sqrt(t.eps);
    return t;
}

ScalarField truncate_shape(const ScalarField& eps, const CrossSection& gt, double gamma, ShapeKind kind, double fill) {
    const Grid3D& g = eps.grid();
    ScalarField out(g, fill);
    if (gt.empty()) return out;
    const double emax = eps.max(), emin = eps.min();
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            if (!gt.contains(g.x(i), g.y(j))) continue;
            for (int k = 0; k < g.nz(); ++k) {
                const double e = eps(i, j, k);
                const bool keep = kind == ShapeKind::Strong ? e >= gamma * emax : e <= emin / gamma;
                if (keep) out(i, j, k) = e;
            }
        }
    return out;
}

}  // namespace gcm
