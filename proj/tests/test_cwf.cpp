#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "gcm/cwf.hpp"

using namespace gcm;

namespace {
double quad_moment(int a, int b, double sn, double h, double lam) {
    auto f = [&](double s) {
        const double tau = sn + h - s;
        return std::pow(s, a) * std::pow(tau, b) * std::exp(-lam * tau);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, sn, sn + h, 10, 1e-15);
}
}  // namespace

TEST_CASE("moments agree with adaptive quadrature") {
    for (double lam : {1e-8, 1.0, 20.0, 100.0, 200.0, 1000.0})
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; b <= 2; ++b) {
                const double q = quad_moment(a, b, 8.0, 0.05, lam);
                CHECK(std::abs(cwf_moment(a, b, 8.0, 0.05, lam) - q) <= 1e-10 * std::abs(q) + 1e-300);
            }
}

TEST_CASE("tau moments on both sides of the series switch") {
    for (double lam : {99.0, 101.0}) {
        auto f = [&](double t) { return t * t * std::exp(-lam * t); };
        const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 0.05, 10, 1e-15);
        CHECK(cwf_tau_moment(2, 0.05, lam) == doctest::Approx(q).epsilon(1e-12));
    }
    CHECK_THROWS(cwf_tau_moment(-1, 0.05, 1.0));
}

TEST_CASE("coefficients in the small-lambda limit") {
    // lambda -> 0: plain polynomial moments over [s_n, s_n + h]
    const double sn = 8.0, h = 0.05;
    const CwfCoefficients c = cwf_coefficients(sn, h, 1e-9);
    const double S = sn + h;
    auto P = [&](int a, int b) { return quad_moment(a, b, sn, h, 0.0); };
    CHECK(c.I0 == doctest::Approx(h));
    CHECK(c.A1 == doctest::Approx((2 * P(2, 0) - 4 * P(1, 1)) / h).epsilon(1e-8));
    CHECK(c.A2 == doctest::Approx((2 * P(2, 1) - 2 * P(1, 2)) / h).epsilon(1e-8));
    CHECK(c.A3 == doctest::Approx(-(S * S - sn * sn) / h).epsilon(1e-8));
    CHECK_THROWS(cwf_coefficients(sn, h, 0.0));
    CHECK_THROWS(cwf_coefficients(sn, -h, 1.0));
}

TEST_CASE("frozen coefficients") {
    const CwfCoefficients a = cwf_coefficients(7.0, 0.05, 20.0);
    const CwfCoefficients b = cwf_coefficients(7.0, 0.05, 200.0);
    CHECK(b.A2 / a.A2 == doctest::Approx(0.2409).epsilon(1e-3));
    CHECK(a.A3 < 0.0);
    CHECK(b.A1 > 0.0);
}
