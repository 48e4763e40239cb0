#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gsl/gsl_sf_expint.h>
#include <limits>
#include <numbers>

#include "cpatom/errors.hpp"
#include "cpatom/specfun.hpp"
#include "support.hpp"

using namespace cpatom;
using testing::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Laplace-type representations, independent of the series and continued fraction.
double f_integral(double x) {
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate([x](double t) { return std::exp(-x * t) / (1 + t * t); }, 1e-14);
}
double g_integral(double x) {
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate([x](double t) { return t * std::exp(-x * t) / (1 + t * t); }, 1e-14);
}

double si_integral(double x) {
    using boost::math::quadrature::gauss_kronrod;
    double s = 0;
    // Split into unit pieces so the rule sees few oscillations at a time.
    for (double a = 0; a < x; a += 1.0) {
        double b = std::min(a + 1.0, x);
        s += gauss_kronrod<double, 31>::integrate([](double t) { return t == 0 ? 1.0 : std::sin(t) / t; }, a, b, 0);
    }
    return s;
}

}  // namespace

TEST_CASE("sine and cosine integrals match reference values") {
    CHECK(sine_integral(kPi) == doctest::Approx(1.8519370519824661).epsilon(1e-14));
    CHECK(cosine_integral(1.0) == doctest::Approx(0.33740392290096813).epsilon(1e-14));
    CHECK(sine_integral(0.0) == 0.0);
    CHECK(sine_integral(kInf) == kPi / 2);
    CHECK(sine_integral(-kInf) == -kPi / 2);
}

TEST_CASE("sine integral agrees with direct quadrature and GSL") {
    for (double x : {0.1, 0.5, 1.0, 3.9, 4.0, 4.1, 7.5, 20.0, 63.0}) {
        CAPTURE(x);
        CHECK(rel_err(sine_integral(x), si_integral(x)) < 1e-12);
        CHECK(rel_err(sine_integral(x), gsl_sf_Si(x)) < 1e-12);
        CHECK(std::abs(cosine_integral(x) - gsl_sf_Ci(x)) < 1e-12 * std::max(1.0, std::abs(gsl_sf_Ci(x))));
    }
}

TEST_CASE("auxiliary functions match their Laplace integrals") {
    for (double x : {0.1, 0.3, 1.0, 2.0, 3.99, 4.01, 10.0, 50.0, 100.0, 1e3}) {
        CAPTURE(x);
        double f, g;
        aux_fg(x, f, g);
        CHECK(rel_err(f, f_integral(x)) < 1e-12);
        CHECK(rel_err(g, g_integral(x)) < 1e-12);
        CHECK(f == aux_f(x));
        CHECK(g == aux_g(x));
    }
}

TEST_CASE("auxiliary functions are continuous across the method switch") {
    const double a = 4.0 * (1 - 1e-15), b = 4.0 * (1 + 1e-15);
    CHECK(rel_err(aux_f(a), aux_f(b)) < 1e-14);
    CHECK(rel_err(aux_g(a), aux_g(b)) < 1e-14);
    CHECK(rel_err(sine_integral(a), sine_integral(b)) < 1e-14);
}

TEST_CASE("derivative identities f' = -g and g' = f - 1/x") {
    testing::Gen gen(11);
    for (int i = 0; i < 200; ++i) {
        double x = gen.log_uniform(0.1, 100.0);
        CAPTURE(x);
        double h = 1e-3 * x;
        double df = testing::derivative(aux_f, x, h);
        double dg = testing::derivative(aux_g, x, h);
        CHECK(std::abs(df + aux_g(x)) < 1e-6 * std::abs(aux_g(x)));
        CHECK(std::abs(dg - (aux_f(x) - 1 / x)) < 1e-6 * std::abs(aux_f(x) - 1 / x) + 1e-13);
    }
}

TEST_CASE("Ci and pi/2 - Si are reconstructed from f and g") {
    testing::Gen gen(12);
    for (int i = 0; i < 500; ++i) {
        double x = gen.log_uniform(0.1, 100.0);
        CAPTURE(x);
        double f = aux_f(x), g = aux_g(x), c = std::cos(x), s = std::sin(x);
        CHECK(std::abs(f * s - g * c - cosine_integral(x)) < 1e-10);
        CHECK(std::abs(f * c + g * s - (kPi / 2 - sine_integral(x))) < 1e-10);
    }
}

TEST_CASE("large-argument behaviour and symmetry") {
    for (double x : {1e3, 1e5, 1e8}) {
        CHECK(rel_err(aux_f(x), 1 / x) < 3 / (x * x) + 1e-15);
        CHECK(rel_err(aux_g(x), 1 / (x * x)) < 7 / (x * x) + 1e-15);
    }
    testing::Gen gen(13);
    for (int i = 0; i < 100; ++i) {
        double x = gen.uniform(0, 80);
        CHECK(sine_integral(-x) == -sine_integral(x));
    }
    // Ci(x) - ln x -> Euler gamma at small x.
    CHECK(cosine_integral(1e-8) - std::log(1e-8) == doctest::Approx(std::numbers::egamma).epsilon(1e-12));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(cosine_integral(0.0), DomainError);
    CHECK_THROWS_AS(cosine_integral(-1.0), DomainError);
    CHECK_THROWS_AS(aux_f(0.0), DomainError);
    CHECK_THROWS_AS(aux_g(-2.0), DomainError);
    CHECK_THROWS_AS(thermal_coth_factor(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(thermal_coth_factor(1.0, -1.0), DomainError);
}

TEST_CASE("thermal coth factor") {
    CHECK(thermal_coth_factor(kInf, 2.0) == 1.0);
    for (double b : {0.01, 0.5, 3.0, 40.0}) CHECK(rel_err(thermal_coth_factor(b, 1.3), 1 / std::tanh(b * 1.3 / 2)) < 1e-14);
}

TEST_CASE("coth series helpers") {
    for (double x : {-0.9, -0.3, 1e-4, 0.5, 0.99, 1.5, -4.0, 20.0}) {
        CAPTURE(x);
        // Taylor oracle where the direct difference cancels.
        double ref = std::abs(x) < 1e-2 ? x / 3 - x * x * x / 45 : 1 / std::tanh(x) - 1 / x;
        CHECK(rel_err(detail::coth_minus_inv(x), ref) < 1e-13);
    }
}
