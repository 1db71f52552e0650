#include "gcm/preprocess.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "gcm/laplace.hpp"

namespace gcm {

TimeSeriesCube offset_correct(const TimeSeriesCube& cube) {
    TimeSeriesCube out = cube;
    for (int iy = 0; iy < cube.nyd(); ++iy) {
        for (int ix = 0; ix < cube.nxd(); ++ix) {
            double mean = 0.0;
            for (int it = 0; it < cube.nt(); ++it) mean += cube(ix, iy, it);
            mean /= cube.nt();
            for (int it = 0; it < cube.nt(); ++it) out(ix, iy, it) = cube(ix, iy, it) - mean;
        }
    }
    return out;
}

namespace {

TimeSeriesCube shift_samples(const TimeSeriesCube& cube, double shift) {
    TimeSeriesCube out = cube;
    const int nt = cube.nt();
    const double fl = std::floor(shift + 1e-9);
    const double frac = std::abs(shift - fl) < 1e-9 ? 0.0 : shift - fl;
    const long k = static_cast<long>(fl);
    for (int iy = 0; iy < cube.nyd(); ++iy) {
        for (int ix = 0; ix < cube.nxd(); ++ix) {
            for (int it = 0; it < nt; ++it) {
                auto at = [&](long j) { return (j >= 0 && j < nt) ? cube(ix, iy, static_cast<int>(j)) : 0.0; };
                const long j = it + k;
                out(ix, iy, it) = frac == 0.0 ? at(j) : (1.0 - frac) * at(j) + frac * at(j + 1);
            }
        }
    }
    return out;
}

}  // namespace

TimeSeriesCube time_zero_correct(const TimeSeriesCube& cube, double t_emit) {
    if (t_emit < 0.0) throw std::invalid_argument("time_zero_correct: negative emission time");
    if (t_emit >= cube.nt() * cube.dt()) throw std::invalid_argument("time_zero_correct: shift beyond record length");
    return shift_samples(cube, t_emit / cube.dt());
}

TimeSeriesCube shift_source(const TimeSeriesCube& cube, double dz) {
    if (std::abs(dz) >= cube.nt() * cube.dt()) throw std::invalid_argument("shift_source: shift beyond record length");
    return shift_samples(cube, dz / cube.dt());
}

TimeSeriesCube calibrate(const TimeSeriesCube& cube, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw std::invalid_argument("calibrate: factor must be positive");
    TimeSeriesCube out = cube;
    for (double& v : out.data()) v *= factor;
    return out;
}

namespace {
void strongest_detector(const TimeSeriesCube& c, int& bx, int& by) {
    double best = -1.0;
    bx = by = 0;
    for (int iy = 0; iy < c.nyd(); ++iy)
        for (int ix = 0; ix < c.nxd(); ++ix) {
            double m = 0.0;
            for (int it = 0; it < c.nt(); ++it) m = std::max(m, std::abs(c(ix, iy, it)));
            if (m > best) {
                best = m;
                bx = ix;
                by = iy;
            }
        }
}
// strongest detector after removing the detector-averaged trace, so a flat
// surface return does not decide the choice
void target_detector(const TimeSeriesCube& c, int& bx, int& by) {
    const int nd = c.detectors();
    std::vector<double> mean(c.nt(), 0.0);
    for (int it = 0; it < c.nt(); ++it) {
        for (int iy = 0; iy < c.nyd(); ++iy)
            for (int ix = 0; ix < c.nxd(); ++ix) mean[it] += c(ix, iy, it);
        mean[it] /= nd;
    }
    double best = -1.0;
    bx = by = 0;
    for (int iy = 0; iy < c.nyd(); ++iy)
        for (int ix = 0; ix < c.nxd(); ++ix) {
            double m = 0.0;
            for (int it = 0; it < c.nt(); ++it) m = std::max(m, std::abs(c(ix, iy, it) - mean[it]));
            if (m > best) {
                best = m;
                bx = ix;
                by = iy;
            }
        }
    if (best <= 1e-3 * c.max_abs()) strongest_detector(c, bx, by);
}
double trace_peak(const TimeSeriesCube& c, int ix, int iy) {
    double m = 0.0;
    for (int it = 0; it < c.nt(); ++it) m = std::max(m, std::abs(c(ix, iy, it)));
    return m;
}
}  // namespace

double estimate_calibration_factor(const TimeSeriesCube& measured, const TimeSeriesCube& simulated) {
    if (measured.nxd() != simulated.nxd() || measured.nyd() != simulated.nyd()) {
        throw std::invalid_argument("estimate_calibration_factor: detector lattices differ");
    }
    int bx, by;
    strongest_detector(simulated, bx, by);
    const double pm = trace_peak(measured, bx, by);
    if (pm == 0.0) throw std::domain_error("estimate_calibration_factor: zero measured peak");
    return trace_peak(simulated, bx, by) / pm;
}

TimeSeriesCube propagate_fk(const TimeSeriesCube& cube, double a, const FkOptions& opt) {
    const double b = cube.plane_z();
    if (a > b + 1e-12) throw std::invalid_argument("propagate_fk: target plane lies beyond the recording plane");
    const double d = std::max(0.0, b - a);
    const int pad = opt.mirror ? 0 : std::max(0, opt.lateral_pad);
    int nx = cube.nxd() + 2 * pad, ny = cube.nyd() + 2 * pad;
    if (opt.mirror) {
        nx = cube.nxd() > 1 ? 2 * (cube.nxd() - 1) : 1;
        ny = cube.nyd() > 1 ? 2 * (cube.nyd() - 1) : 1;
    }
    int nt = cube.nt() + static_cast<int>(std::ceil(d / cube.dt())) + 1;
    // small-prime sizes keep FFTW fast
    auto smooth = [](int n) {
        for (;; ++n) {
            int m = n;
            for (int p : {2, 3, 5}) while (m % p == 0) m /= p;
            if (m == 1) return n;
        }
    };
    nt = smooth(nt);
    const std::size_t N = static_cast<std::size_t>(nx) * ny * nt;
    fftw_complex* buf = fftw_alloc_complex(N);
    if (!buf) throw std::bad_alloc();
    // layout [ix][iy][it], it fastest
    for (std::size_t n = 0; n < N; ++n) buf[n][0] = buf[n][1] = 0.0;
    if (opt.mirror) {
        auto fold = [](int j, int n) { return j < n ? j : 2 * n - 2 - j; };
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny; ++iy)
                for (int it = 0; it < cube.nt(); ++it)
                    buf[(static_cast<std::size_t>(ix) * ny + iy) * nt + it][0] =
                        cube(fold(ix, cube.nxd()), fold(iy, cube.nyd()), it);
    } else {
        for (int ix = 0; ix < cube.nxd(); ++ix)
            for (int iy = 0; iy < cube.nyd(); ++iy)
                for (int it = 0; it < cube.nt(); ++it)
                    buf[((static_cast<std::size_t>(ix + pad) * ny) + iy + pad) * nt + it][0] = cube(ix, iy, it);
    }
    fftw_plan fwd = fftw_plan_dft_3d(nx, ny, nt, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_3d(nx, ny, nt, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(fwd);
    auto freq = [](int i, int n, double step) {
        const int k = i <= n / 2 ? i : i - n;
        return 2.0 * M_PI * k / (n * step);
    };
    for (int ix = 0; ix < nx; ++ix) {
        const double kx = freq(ix, nx, cube.dx());
        for (int iy = 0; iy < ny; ++iy) {
            const double ky = freq(iy, ny, cube.dy());
            const double k2 = kx * kx + ky * ky;
            for (int it = 0; it < nt; ++it) {
                const double w = freq(it, nt, cube.dt());
                fftw_complex& c = buf[(static_cast<std::size_t>(ix) * ny + iy) * nt + it];
                const double disc = w * w - k2;
                if (disc < 0.0 || (opt.max_omega > 0.0 && std::abs(w) > opt.max_omega)) {
                    c[0] = c[1] = 0.0;
                    continue;
                }
                const double ph = d * (w >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc);
                const std::complex<double> z = std::complex<double>(c[0], c[1]) * std::polar(1.0, ph);
                c[0] = z.real();
                c[1] = z.imag();
            }
        }
    }
    fftw_execute(bwd);
    TimeSeriesCube out(cube.nxd(), cube.nyd(), cube.nt(), cube.dt(), cube.dx(), cube.dy(), a, cube.t0(), cube.x0(),
                       cube.y0());
    const double scale = 1.0 / static_cast<double>(N);
    for (int ix = 0; ix < cube.nxd(); ++ix)
        for (int iy = 0; iy < cube.nyd(); ++iy)
            for (int it = 0; it < cube.nt(); ++it)
                out(ix, iy, it) = buf[((static_cast<std::size_t>(ix + pad) * ny) + iy + pad) * nt + it][0] * scale;
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
    return out;
}

std::vector<Peak> find_peaks(const std::vector<double>& tr, double rel_floor, double ref) {
    std::vector<Peak> out;
    if (tr.size() < 3) return out;
    if (ref <= 0.0)
        for (double v : tr) ref = std::max(ref, std::abs(v));
    if (ref == 0.0) return out;
    const double floor = rel_floor * ref;
    for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
        const double v = tr[i];
        if (std::abs(v) < floor || v == 0.0) continue;
        const bool maxi = v > 0.0 && v > tr[i - 1] && v >= tr[i + 1];
        const bool mini = v < 0.0 && v < tr[i - 1] && v <= tr[i + 1];
        if (maxi || mini) out.push_back(Peak{static_cast<int>(i), v, v > 0.0 ? 1 : -1});
    }
    return out;
}

DepthEstimate estimate_depth(const TimeSeriesCube& cube, const DepthOptions& opt) {
    if (!(opt.n_sand > 0.0)) throw std::invalid_argument("estimate_depth: n_sand must be positive");
    DepthEstimate est;
    target_detector(cube, est.det_ix, est.det_iy);
    est.peaks = find_peaks(cube.trace(est.det_ix, est.det_iy), opt.peak_floor);
    const auto& P = est.peaks;
    for (std::size_t i = 0; i < P.size(); ++i)
        if (P[i].sign < 0) {
            est.first_negative = static_cast<int>(i);
            break;
        }
    if (est.first_negative < 0 || static_cast<int>(P.size()) - est.first_negative < 5) {
        est.reason = "fewer than five peaks";
        return est;
    }
    const int fn = est.first_negative;
    int sand = -1;
    for (int i = fn; i < fn + 4; ++i)
        if (P[i].sign < 0 && (sand < 0 || P[i].amplitude < P[sand].amplitude)) sand = i;
    est.sand_peak = sand;
    for (int p = fn + 4; p < static_cast<int>(P.size()); ++p) {
        int q = p - 1;
        while (q >= 0 && P[q].sign != P[p].sign) --q;
        if (q >= 0 && std::abs(P[p].amplitude) > std::abs(P[q].amplitude)) {
            est.target_peak = p;
            break;
        }
    }
    if (est.target_peak < 0) {
        est.reason = "no strengthening peak after the excluded window";
        return est;
    }
    // main lobe of the target wavelet
    int tref = est.target_peak;
    for (int p = fn + 4; p < std::min<int>(est.target_peak + 4, P.size()); ++p)
        if (std::abs(P[p].amplitude) > std::abs(P[tref].amplitude)) tref = p;
    est.main_peak = tref;
    est.delay = (P[tref].index - P[sand].index) * cube.dt();
    est.depth = opt.depth_factor * opt.n_sand * est.delay;
    est.found = true;
    return est;
}

const char* target_kind_name(TargetKind k) {
    switch (k) {
        case TargetKind::Strong: return "strong";
        case TargetKind::Weak: return "weak";
        case TargetKind::Missed: return "missed";
    }
    return "?";
}

std::vector<std::pair<int, int>> ring_order(int nxd, int nyd, int cx, int cy) {
    std::vector<std::pair<int, int>> out;
    const int rmax = std::max({cx, nxd - 1 - cx, cy, nyd - 1 - cy});
    for (int r = 0; r <= rmax; ++r)
        for (int iy = cy - r; iy <= cy + r; ++iy)
            for (int ix = cx - r; ix <= cx + r; ++ix) {
                if (ix < 0 || iy < 0 || ix >= nxd || iy >= nyd) continue;
                if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != r) continue;
                out.emplace_back(ix, iy);
            }
    return out;
}

Extraction classify_and_extract(const TimeSeriesCube& cube, const DepthEstimate& est, const ExtractOptions& opt) {
    Extraction ex;
    ex.cube = cube;
    TargetClassification& cls = ex.cls;
    cls.det_ix = est.det_ix;
    cls.det_iy = est.det_iy;
    cls.depth = est.depth;
    cls.first_peak.assign(static_cast<std::size_t>(cube.detectors()), -1);
    auto missed = [&]() {
        cls.kind = TargetKind::Missed;
        std::fill(ex.cube.data().begin(), ex.cube.data().end(), 0.0);
        return ex;
    };
    if (!est.found) return missed();
    const auto& P = est.peaks;
    const int start = est.first_negative + 4;
    const bool weak_polarity = P[est.main_peak].sign > 0;
    if (est.depth > opt.max_weak_depth && weak_polarity) return missed();

    int strongest_neg = -1;
    for (int p = start; p < static_cast<int>(P.size()); ++p)
        if (P[p].sign < 0 && (strongest_neg < 0 || P[p].amplitude < P[strongest_neg].amplitude)) strongest_neg = p;
    const bool stronger_than_sand =
        strongest_neg >= 0 && std::abs(P[strongest_neg].amplitude) > std::abs(P[est.sand_peak].amplitude);

    int first = -1;
    if (est.depth > opt.max_weak_depth || stronger_than_sand) {
        cls.kind = TargetKind::Strong;
        first = strongest_neg;
    } else {
        cls.kind = TargetKind::Weak;
        for (int p = start; p < static_cast<int>(P.size()) && first < 0; ++p) {
            if (P[p].sign <= 0) continue;
            int q = p - 1;
            while (q >= 0 && P[q].sign <= 0) --q;
            if (q >= 0 && P[p].amplitude > P[q].amplitude) first = p;
        }
    }
    if (first < 0) return missed();
    const int want = P[first].sign;
    cls.first_peak_sign = want;

    const double ref = cube.max_abs();
    const auto order = ring_order(cube.nxd(), cube.nyd(), est.det_ix, est.det_iy);
    std::vector<int> done;
    for (std::size_t o = 0; o < order.size(); ++o) {
        const auto [ix, iy] = order[o];
        const std::size_t id = static_cast<std::size_t>(iy) * cube.nxd() + ix;
        int chosen = -1;
        if (o == 0) {
            chosen = P[first].index;
        } else {
            // time of the nearest already-processed detector
            int ref_t = -1;
            double best = std::numeric_limits<double>::max();
            for (int did : done) {
                const int jx = did % cube.nxd(), jy = did / cube.nxd();
                const double dd = std::hypot(jx - ix, jy - iy);
                if (dd < best && cls.first_peak[did] >= 0) {
                    best = dd;
                    ref_t = cls.first_peak[did];
                }
            }
            if (ref_t >= 0) {
                const auto pk = find_peaks(cube.trace(ix, iy), opt.peak_floor, ref);
                int bestdt = std::numeric_limits<int>::max();
                for (const Peak& p : pk) {
                    if (p.sign != want) continue;
                    const int dt = std::abs(p.index - ref_t);
                    if (dt < bestdt) {
                        bestdt = dt;
                        chosen = p.index;
                    }
                }
            }
        }
        cls.first_peak[id] = chosen;
        done.push_back(static_cast<int>(id));
        const int cut = chosen < 0 ? cube.nt() : chosen;
        for (int it = 0; it < cut; ++it) ex.cube(ix, iy, it) = 0.0;
    }
    return ex;
}

bool CrossSection::empty() const { return count() == 0; }

std::size_t CrossSection::count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

bool CrossSection::contains(double x, double y) const {
    const long ix = std::lround((x - x0) / dx), iy = std::lround((y - y0) / dy);
    if (ix < 0 || iy < 0 || ix >= nxd || iy >= nyd) return false;
    return mask[static_cast<std::size_t>(iy) * nxd + ix] != 0;
}

void CrossSection::bounds(double& xmin, double& xmax, double& ymin, double& ymax) const {
    xmin = ymin = std::numeric_limits<double>::max();
    xmax = ymax = -std::numeric_limits<double>::max();
    for (int iy = 0; iy < nyd; ++iy)
        for (int ix = 0; ix < nxd; ++ix) {
            if (!mask[static_cast<std::size_t>(iy) * nxd + ix]) continue;
            xmin = std::min(xmin, x0 + (ix - 0.5) * dx);
            xmax = std::max(xmax, x0 + (ix + 0.5) * dx);
            ymin = std::min(ymin, y0 + (iy - 0.5) * dy);
            ymax = std::max(ymax, y0 + (iy + 0.5) * dy);
        }
}

void CrossSection::centroid(double& x, double& y) const {
    double sx = 0, sy = 0;
    std::size_t n = 0;
    for (int iy = 0; iy < nyd; ++iy)
        for (int ix = 0; ix < nxd; ++ix)
            if (mask[static_cast<std::size_t>(iy) * nxd + ix]) {
                sx += x0 + ix * dx;
                sy += y0 + iy * dy;
                ++n;
            }
    x = n ? sx / n : 0.0;
    y = n ? sy / n : 0.0;
}

CrossSection estimate_cross_section(const TimeSeriesCube& cube, double s, double beta) {
    if (!(beta > 0.0) || beta > 1.0) throw std::invalid_argument("estimate_cross_section: beta must be in (0, 1]");
    CrossSection cs;
    cs.nxd = cube.nxd();
    cs.nyd = cube.nyd();
    cs.x0 = cube.x0();
    cs.y0 = cube.y0();
    cs.dx = cube.dx();
    cs.dy = cube.dy();
    cs.mask.assign(static_cast<std::size_t>(cube.detectors()), 0);
    std::vector<double> W(cs.mask.size());
    double mx = 0.0;
    for (int iy = 0; iy < cube.nyd(); ++iy)
        for (int ix = 0; ix < cube.nxd(); ++ix) {
            const auto tr = cube.trace(ix, iy);
            const double v = std::abs(laplace_transform(tr, cube.dt(), s, cube.t0()));
            W[static_cast<std::size_t>(iy) * cube.nxd() + ix] = v;
            mx = std::max(mx, v);
        }
    if (mx == 0.0) return cs;
    for (std::size_t n = 0; n < W.size(); ++n) cs.mask[n] = W[n] >= beta * mx * (1.0 - 1e-12) ? 1 : 0;
    return cs;
}

}  // namespace gcm
