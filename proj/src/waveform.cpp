#include "gcm/waveform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gcm {

double Waveform::duration() const {
    const double periods = kind == Kind::Cosine ? 1.0 : cycles;
    return 2.0 * std::numbers::pi * periods / omega;
}

void Waveform::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("waveform: omega must be positive");
    if (kind == Kind::HannBurst && !(cycles > 0.0)) throw std::invalid_argument("waveform: cycles must be positive");
    if (!(amplitude_scale != 0.0) || !std::isfinite(amplitude_scale)) {
        throw std::invalid_argument("waveform: amplitude must be finite and nonzero");
    }
}

const char* waveform_kind_name(Waveform::Kind k) {
    return k == Waveform::Kind::Cosine ? "cosine" : "hann_burst";
}

Waveform::Kind parse_waveform_kind(const std::string& name) {
    if (name == "cosine") return Waveform::Kind::Cosine;
    if (name == "hann_burst") return Waveform::Kind::HannBurst;
    throw std::invalid_argument("unknown waveform kind '" + name + "'");
}

double waveform_value(const Waveform& w, double t) {
    if (t < 0.0) throw std::domain_error("waveform_value: negative time");
    const double t1 = w.duration();
    if (t > t1) return 0.0;
    const double a = 2.0 * w.omega * w.amplitude_scale;
    if (w.kind == Waveform::Kind::Cosine) return a * std::cos(w.omega * t);
    // d/dt [win(t) sin(w(t - t1/2))] / w, so the burst integrates to zero
    const double k = 2.0 * std::numbers::pi / t1;
    const double win = 0.5 * (1.0 - std::cos(k * t));
    const double dwin = 0.5 * k * std::sin(k * t);
    const double ph = w.omega * (t - 0.5 * t1);
    return a * (win * std::cos(ph) + dwin * std::sin(ph) / w.omega);
}

double tilde_f(const Waveform& w, double s) {
    if (!(s > 0.0)) throw std::domain_error("tilde_f: s must be positive");
    double val;
    const double t1 = w.duration();
    if (w.kind == Waveform::Kind::Cosine) {
        // int_0^t1 2w cos(wt) e^{-st} dt with cos(w t1) = 1, sin(w t1) = 0
        val = 2.0 * w.omega * w.amplitude_scale * s * (1.0 - std::exp(-s * t1)) / (s * s + w.omega * w.omega);
    } else {
        const int n = 20000;
        const double h = t1 / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = i * h;
            const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += c * waveform_value(w, t) * std::exp(-s * t);
        }
        val = acc * h / 3.0;
    }
    if (std::abs(val) < 1e-12) throw std::domain_error("tilde_f: transform vanishes at s");
    return val;
}

}  // namespace gcm
