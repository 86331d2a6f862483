#include <cmath>
#include <numbers>

#include "bosecorr/errors.hpp"
#include "bosecorr/green_homogeneous.hpp"
#include "doctest.h"

using namespace bosecorr;

namespace {

constexpr double pi = std::numbers::pi;

// hbar = v = 1, beta = 1, R_c = beta / ratio
PhysicalParams params_with_ratio(double ratio, double beta = 1.0) {
    PhysicalParams p;
    p.beta = beta;
    const double rc = beta / ratio;
    p.Omega = std::sqrt(2.0) / rc;
    return p;
}

double brute_cos_sum(int m, double theta, long l_max) {
    long double s = 0.0L;
    for (long l = l_max; l >= 1; --l) {
        s += std::cos(2.0L * std::numbers::pi_v<long double> * l * theta) /
             std::pow(static_cast<long double>(l), 2 * m);
    }
    return static_cast<double>(s);
}

}  // namespace

TEST_CASE("Bernoulli cosine sums match direct summation") {
    CHECK(bernoulli_cos_sum(1, 0.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-15));
    for (double theta : {0.1, 0.25, 0.5, 0.77, 0.999}) {
        CHECK(std::abs(bernoulli_cos_sum(1, theta) - brute_cos_sum(1, theta, 1000000)) < 1e-8);
        CHECK(std::abs(bernoulli_cos_sum(2, theta) - brute_cos_sum(2, theta, 20000)) < 1e-12);
        CHECK(std::abs(bernoulli_cos_sum(3, theta) - brute_cos_sum(3, theta, 20000)) < 1e-12);
    }
    // the bracket (1/2 - dtau/beta)^2 - 1/12 in disguise
    CHECK(bernoulli_cos_sum(1, 0.5) == doctest::Approx(pi * pi * (0.25 - 0.5 + 1.0 / 6.0)).epsilon(1e-15));
    CHECK_THROWS_AS(bernoulli_cos_sum(4, 0.1), UsageError);
}

TEST_CASE("log|2 sinh z| stays finite for large arguments") {
    CHECK(log_abs_2sinh({1.0, 0.0}) == doctest::Approx(std::log(2.0 * std::sinh(1.0))));
    CHECK(log_abs_2sinh({0.0, pi / 2}) == doctest::Approx(std::log(2.0)));
    CHECK(log_abs_2sinh({-3.0, 0.4}) == doctest::Approx(std::log(std::abs(2.0 * std::sinh(cplx(-3.0, 0.4))))));
    CHECK(log_abs_2sinh({2000.0, 0.3}) == doctest::Approx(2000.0));
}

TEST_CASE("homog_series depends on differences only") {
    const auto p = params_with_ratio(0.05);
    const auto d = derive_scales(p);
    HomogSeriesControl c;
    c.l_max = 32;
    c.n_max = 400;
    // dyadic shifts keep x - x' and tau - tau' exact
    const auto g1 = homog_series({1.5, 0.5}, {0.25, 0.125}, p, d, c);
    const auto g2 = homog_series({1.5 + 2.0, 0.5 + 0.25}, {0.25 + 2.0, 0.125 + 0.25}, p, d, c);
    CHECK(g1.value == g2.value);
    // conjugation under dtau -> -dtau; the paired sum is real
    const auto g3 = homog_series({1.5, 0.125}, {0.25, 0.5}, p, d, c);
    CHECK(g3.value == std::conj(g1.value));
    CHECK(g1.value.imag() == 0.0);
    // symmetrized value is real
    const auto g21 = homog_series({0.25, 0.125}, {1.5, 0.5}, p, d, c);
    CHECK((g1.value + g21.value).imag() == 0.0);
}

TEST_CASE("homog_series periodicity") {
    const auto p = params_with_ratio(0.5);
    const auto d = derive_scales(p);
    HomogSeriesControl c;
    c.l_max = 40;
    c.n_max = 300;
    const double rc = d.R_c;
    // beta-periodic in dtau: dtau = 0.3 and 0.3 - 1
    const auto a = homog_series({0.4 * rc, 0.6}, {0.1 * rc, 0.3}, p, d, c);
    const auto b = homog_series({0.4 * rc, 0.0}, {0.1 * rc, 0.7}, p, d, c);
    CHECK(a.value.real() == doctest::Approx(b.value.real()).epsilon(1e-12));
    // 2R_c-periodic in dx: dx = 0.3 R_c and 0.3 R_c - 2 R_c
    const auto e = homog_series({-0.85 * rc, 0.2}, {0.85 * rc, 0.1}, p, d, c);
    const auto f = homog_series({0.45 * rc, 0.2}, {0.15 * rc, 0.1}, p, d, c);
    CHECK(e.value.real() == doctest::Approx(f.value.real()).epsilon(1e-12));
}

TEST_CASE("homog_series: tail modes agree within the reported truncation error") {
    const auto p = params_with_ratio(0.05);
    const auto d = derive_scales(p);
    HomogSeriesControl none{200, 2000, TailMode::None};
    HomogSeriesControl bern{200, 2000, TailMode::Bernoulli};
    const SpacetimePoint a{0.7, 0.3}, b{0.0, 0.1}, ra{0.2, 0.3}, rb{0.0, 0.1};
    const double dn = green_difference(homog_series(a, b, p, d, none), homog_series(ra, rb, p, d, none));
    const auto ga = homog_series(a, b, p, d, bern);
    const double db = green_difference(ga, homog_series(ra, rb, p, d, bern));
    const double err = homog_series(a, b, p, d, none).trunc_err + ga.trunc_err;
    CHECK(std::abs(dn - db) <= 2.0 * err);
    CHECK(ga.trunc_err > 0.0);
}

TEST_CASE("homog_series coincident points carry a divergence warning") {
    const auto p = params_with_ratio(0.5);
    const auto d = derive_scales(p);
    HomogSeriesControl c{8, 50, TailMode::None};
    const auto g = homog_series({0.1, 0.2}, {0.1, 0.2}, p, d, c);
    CHECK(g.divergent);
    CHECK(g.notice.find("divergence") != std::string::npos);
    CHECK_THROWS_AS(homog_series({0.1, 0.2}, {0.1, 1.5}, p, d, c), DomainError);
    CHECK_THROWS_AS(homog_series({0.1, 0.2}, {0.1, 0.2}, p, d, HomogSeriesControl{0, 5, TailMode::None}),
                    ConfigError);
}

TEST_CASE("homog_series vs high-temperature closed form") {
    const auto p = params_with_ratio(0.05);  // beta hbar v / R_c = 0.05
    const auto d = derive_scales(p);
    HomogSeriesControl c{400, 4000, TailMode::Bernoulli};
    const SpacetimePoint ra{0.2, 0.3}, rb{0.0, 0.1};
    for (double dx : {0.5, 1.0, 2.0, 4.0}) {
        const SpacetimePoint a{dx, 0.3}, b{0.0, 0.1};
        const double ds = green_difference(homog_series(a, b, p, d, c), homog_series(ra, rb, p, d, c));
        const double da = green_difference(homog_asymptotic_highT(a, b, p, d),
                                           homog_asymptotic_highT(ra, rb, p, d));
        CHECK(std::abs(ds - da) < 0.02 * std::abs(da));
    }
}

TEST_CASE("homog_series vs low-temperature closed form") {
    const auto p = params_with_ratio(100.0);
    const auto d = derive_scales(p);
    HomogSeriesControl c{64, 2000, TailMode::Bernoulli};
    const double rc = d.R_c;
    const SpacetimePoint ra{0.05 * rc, 0.1 + 0.1 * rc}, rb{0.0, 0.1};
    for (double dx : {0.1, 0.3, 0.6}) {
        const SpacetimePoint a{dx * rc, 0.1 + 0.2 * rc}, b{0.0, 0.1};
        const double ds = green_difference(homog_series(a, b, p, d, c), homog_series(ra, rb, p, d, c));
        const double da = green_difference(homog_asymptotic_lowT(a, b, p, d),
                                           homog_asymptotic_lowT(ra, rb, p, d));
        CHECK(std::abs(ds - da) < 0.05 * std::abs(da));
    }
}

TEST_CASE("closed forms: examples and windows") {
    const auto p = params_with_ratio(0.05);
    const auto d = derive_scales(p);
    // dx = 0, dtau = beta/2: sinh of i pi/2 gives 2|sin(pi/2)| = 2
    const auto g = homog_asymptotic_highT({0.0, 0.5}, {0.0, 0.0}, p, d);
    CHECK(g.value.real() == doctest::Approx(std::log(2.0) / (2.0 * pi)));
    CHECK(g.constant_undetermined);
    CHECK(homog_asymptotic_highT({0.3, 0.2}, {0.3, 0.2}, p, d).divergent);
    CHECK(homog_asymptotic_lowT({0.3, 0.2}, {0.3, 0.2}, p, d).divergent);
    CHECK_THROWS_AS(homog_asymptotic_highT({0.0, 1.5}, {0.0, 0.0}, p, d), DomainError);
    CHECK_THROWS_AS(homog_asymptotic_lowT({2.5 * d.R_c, 0.0}, {0.0, 0.0}, p, d), DomainError);

    // at large |dx| the quadratic term outgrows the (linear) log: the value turns down
    const double mid = homog_asymptotic_highT({30.0, 0.0}, {0.0, 0.0}, p, d).value.real();
    const double far = homog_asymptotic_highT({39.0, 0.0}, {0.0, 0.0}, p, d).value.real();
    CHECK(far < mid);
}

TEST_CASE("low-T form is the high-T form with space and imaginary time exchanged") {
    // hbar v = 1: (dx, dtau, beta, R_c) -> (dtau, -dx, 2 R_c, beta / 2)
    const auto p = params_with_ratio(20.0, 2.0);
    const auto d = derive_scales(p);
    const auto q = params_with_ratio(2.0 * d.R_c / (p.beta / 2.0), 2.0 * d.R_c);
    const auto dq = derive_scales(q);
    REQUIRE(dq.R_c == doctest::Approx(p.beta / 2.0));
    const double pts[3][2] = {{0.01, 0.02}, {0.05, 0.07}, {0.08, 0.3}};
    for (const auto& pt : pts) {
        const double lo = homog_asymptotic_lowT({pt[0], pt[1]}, {0.0, 0.0}, p, d).value.real();
        const double hi = homog_asymptotic_highT({pt[1], 0.0}, {0.0, pt[0]}, q, dq).value.real();
        CHECK(lo == doctest::Approx(hi).epsilon(1e-12));
    }
}

TEST_CASE("green_difference") {
    const auto p = params_with_ratio(0.05);
    const auto d = derive_scales(p);
    const auto g = homog_asymptotic_highT({0.3, 0.2}, {0.0, 0.1}, p, d);
    CHECK(green_difference(g, g) == 0.0);
    const auto s = homog_series({0.3, 0.2}, {0.0, 0.1}, p, d, {8, 50, TailMode::None});
    CHECK(green_difference(s, s) == 0.0);
    CHECK_THROWS_AS(green_difference(g, s), UsageError);
    const auto div = homog_asymptotic_highT({0.3, 0.2}, {0.3, 0.2}, p, d);
    CHECK_THROWS_AS(green_difference(div, g), DivergenceError);
}
