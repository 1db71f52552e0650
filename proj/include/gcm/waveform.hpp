#ifndef GCM_WAVEFORM_HPP
#define GCM_WAVEFORM_HPP

#include <string>

namespace gcm {

/// Source time function. `Cosine` is f(t) = 2w cos(wt) on [0, 2pi/w];
/// `HannBurst` is 2 d/dt[hann(t) sin(w(t - t1/2))] on [0, t1] with
/// t1 = 2pi*cycles/w; it has zero mean, so plane-wave traces carry no step.
struct Waveform {
    enum class Kind { Cosine, HannBurst };
    Kind kind = Kind::Cosine;
    double omega = 30.0;
    double cycles = 2.0;
    double amplitude_scale = 1.0;

    double duration() const;
    void validate() const;
};

const char* waveform_kind_name(Waveform::Kind k);
Waveform::Kind parse_waveform_kind(const std::string& name);

/// f(t); throws for t < 0.
double waveform_value(const Waveform& w, double t);

/// Laplace transform of f at s. Closed form for Cosine, composite Simpson
/// for HannBurst. Throws when |f~(s)| < 1e-12.
double tilde_f(const Waveform& w, double s);

}  // namespace gcm

#endif
