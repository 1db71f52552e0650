#include "gcm/cwf.hpp"

#include <cmath>
#include <stdexcept>

namespace gcm {

double cwf_tau_moment(int k, double h, double lambda) {
    if (k < 0) throw std::invalid_argument("cwf_tau_moment: negative order");
    const double x = lambda * h;
    if (x <= 5.0) {
        // h^{k+1} sum_m (-x)^m / (m! (k+m+1))
        double term = 1.0, sum = 0.0;
        for (int m = 0; m < 200; ++m) {
            const double add = term / (k + m + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum) && m > 4) break;
            term *= -x / (m + 1);
        }
        return std::pow(h, k + 1) * sum;
    }
    // k!/lambda^{k+1} [1 - e^{-x} sum_{j<=k} x^j/j!]
    double partial = 0.0, term = 1.0;
    for (int j = 0; j <= k; ++j) {
        partial += term;
        term *= x / (j + 1);
    }
    double kf = 1.0;
    for (int j = 2; j <= k; ++j) kf *= j;
    return kf / std::pow(lambda, k + 1) * (1.0 - std::exp(-x) * partial);
}

double cwf_moment(int a, int b, double s_n, double h, double lambda) {
    if (a < 0 || b < 0) throw std::invalid_argument("cwf_moment: negative order");
    const double S = s_n + h;
    // s^a = (S - tau)^a expanded binomially
    double sum = 0.0, binom = 1.0;
    for (int k = 0; k <= a; ++k) {
        const double sign = (k % 2) ? -1.0 : 1.0;
        sum += binom * std::pow(S, a - k) * sign * cwf_tau_moment(k + b, h, lambda);
        binom = binom * (a - k) / (k + 1);
    }
    return sum;
}

CwfCoefficients cwf_coefficients(double s_n, double h, double lambda) {
    if (!(h > 0.0) || !(lambda > 0.0) || !(s_n > 0.0)) {
        throw std::invalid_argument("cwf_coefficients: s_n, h and lambda must be positive");
    }
    CwfCoefficients c;
    c.s_n = s_n;
    c.h = h;
    c.lambda = lambda;
    c.I0 = cwf_tau_moment(0, h, lambda);
    auto M = [&](int a, int b) { return cwf_moment(a, b, s_n, h, lambda); };
    c.A1 = (2.0 * M(2, 0) - 4.0 * M(1, 1)) / c.I0;
    c.A2 = (2.0 * M(2, 1) - 2.0 * M(1, 2)) / c.I0;
    c.A3 = -2.0 * M(1, 0) / c.I0;
    return c;
}

}  // namespace gcm
