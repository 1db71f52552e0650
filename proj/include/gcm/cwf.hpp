#ifndef GCM_CWF_HPP
#define GCM_CWF_HPP

namespace gcm {

/// M(a, b) = int_{s_n}^{s_n + h} s^a tau^b exp(-lambda tau) ds with
/// tau = s_n + h - s.
double cwf_moment(int a, int b, double s_n, double h, double lambda);

/// int_0^h tau^k exp(-lambda tau) dtau, stable for any lambda*h >= 0.
double cwf_tau_moment(int k, double h, double lambda);

/// Coefficients of the layer equation
///   lap q + A1 grad q . P = A2 |grad q|^2 + A3 |P|^2,  P = grad V - grad qbar.
struct CwfCoefficients {
    double s_n = 0.0;
    double h = 0.0;
    double lambda = 0.0;
    double I0 = 0.0;
    double A1 = 0.0;
    double A2 = 0.0;
    double A3 = 0.0;
};

CwfCoefficients cwf_coefficients(double s_n, double h, double lambda);

}  // namespace gcm

#endif
