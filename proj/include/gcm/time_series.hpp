#ifndef GCM_TIME_SERIES_HPP
#define GCM_TIME_SERIES_HPP

#include <cstddef>
#include <vector>

namespace gcm {

/// Recordings u(x, y, t) on a detector plane. Samples are t-major:
/// idx = (it * nyd + iy) * nxd + ix. Detector (ix, iy) sits at
/// x = x0 + ix*dx, y = y0 + iy*dy.
class TimeSeriesCube {
public:
    TimeSeriesCube() = default;
    TimeSeriesCube(int nxd, int nyd, int nt, double dt, double dx, double dy, double plane_z,
                   double t0 = 0.0, double x0 = 0.0, double y0 = 0.0);

    int nxd() const { return nxd_; }
    int nyd() const { return nyd_; }
    int nt() const { return nt_; }
    double dt() const { return dt_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double plane_z() const { return plane_z_; }
    double t0() const { return t0_; }
    double x0() const { return x0_; }
    double y0() const { return y0_; }
    void set_t0(double t0) { t0_ = t0; }
    void set_plane_z(double z) { plane_z_ = z; }
    void set_origin(double x0, double y0) { x0_ = x0; y0_ = y0; }

    double time(int it) const { return t0_ + it * dt_; }
    double x(int ix) const { return x0_ + ix * dx_; }
    double y(int iy) const { return y0_ + iy * dy_; }
    int detectors() const { return nxd_ * nyd_; }

    std::size_t index(int ix, int iy, int it) const {
        return (static_cast<std::size_t>(it) * nyd_ + iy) * nxd_ + ix;
    }
    double& operator()(int ix, int iy, int it) { return values_[index(ix, iy, it)]; }
    double operator()(int ix, int iy, int it) const { return values_[index(ix, iy, it)]; }

    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    std::vector<double> trace(int ix, int iy) const;
    void set_trace(int ix, int iy, const std::vector<double>& tr);

    bool all_finite() const;
    /// Largest |sample|.
    double max_abs() const;
    /// Same lattice (counts, steps, plane, origin).
    bool same_shape(const TimeSeriesCube& o) const;

private:
    int nxd_ = 0, nyd_ = 0, nt_ = 0;
    double dt_ = 0.0, dx_ = 0.0, dy_ = 0.0;
    double plane_z_ = 0.0, t0_ = 0.0, x0_ = 0.0, y0_ = 0.0;
    std::vector<double> values_;
};

/// Relative L2 difference ||a - b|| / ||b||.
double relative_l2(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace gcm

#endif
