#include "gcm/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gcm {

TimeSeriesCube::TimeSeriesCube(int nxd, int nyd, int nt, double dt, double dx, double dy,
                               double plane_z, double t0, double x0, double y0)
    : nxd_(nxd), nyd_(nyd), nt_(nt), dt_(dt), dx_(dx), dy_(dy), plane_z_(plane_z), t0_(t0), x0_(x0),
      y0_(y0) {
    if (nxd < 1 || nyd < 1 || nt < 1) throw std::invalid_argument("TimeSeriesCube: empty dimensions");
    if (!(dt > 0.0)) throw std::invalid_argument("TimeSeriesCube: dt must be positive");
    if (!(dx > 0.0) || !(dy > 0.0)) throw std::invalid_argument("TimeSeriesCube: detector pitch must be positive");
    values_.assign(static_cast<std::size_t>(nxd) * nyd * nt, 0.0);
}

std::vector<double> TimeSeriesCube::trace(int ix, int iy) const {
    std::vector<double> tr(nt_);
    for (int it = 0; it < nt_; ++it) tr[it] = (*this)(ix, iy, it);
    return tr;
}

void TimeSeriesCube::set_trace(int ix, int iy, const std::vector<double>& tr) {
    if (static_cast<int>(tr.size()) != nt_) throw std::invalid_argument("set_trace: length mismatch");
    for (int it = 0; it < nt_; ++it) (*this)(ix, iy, it) = tr[it];
}

bool TimeSeriesCube::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double TimeSeriesCube::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool TimeSeriesCube::same_shape(const TimeSeriesCube& o) const {
    auto eq = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
    return nxd_ == o.nxd_ && nyd_ == o.nyd_ && nt_ == o.nt_ && eq(dt_, o.dt_) && eq(dx_, o.dx_) &&
           eq(dy_, o.dy_) && eq(x0_, o.x0_) && eq(y0_, o.y0_);
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("relative_l2: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
    return std::sqrt(num / den);
}

}  // namespace gcm
