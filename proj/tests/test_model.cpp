#include <cmath>

#include "bosecorr/errors.hpp"
#include "bosecorr/model.hpp"
#include "doctest.h"

using namespace bosecorr;

TEST_CASE("derive_scales on unit parameters") {
    const auto d = derive_scales({});
    CHECK(d.v == doctest::Approx(1.0));
    CHECK(d.R_c == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.alpha == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.lambda_T == doctest::Approx(1.0));
}

TEST_CASE("derive_scales examples") {
    PhysicalParams p;
    p.m = 2.0;
    p.Lambda = 8.0;
    CHECK(derive_scales(p).v == doctest::Approx(2.0));

    PhysicalParams q;
    q.Omega = 2.0;
    q.Lambda = 2.0;
    const auto d = derive_scales(q);
    CHECK(d.R_c == doctest::Approx(1.0));
    CHECK(d.v == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.alpha == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("derive_scales identities and scaling") {
    PhysicalParams p{1.3, 0.7, 2.1, 0.4, 3.3, 5.0};
    const auto d = derive_scales(p);
    CHECK(d.v * d.v * p.m == doctest::Approx(p.Lambda).epsilon(1e-14));
    CHECK(d.R_c * d.R_c * p.m * p.Omega * p.Omega == doctest::Approx(2.0 * p.Lambda).epsilon(1e-14));
    CHECK(d.regime_ratio == doctest::Approx(p.beta / d.alpha));

    PhysicalParams q = p;
    q.Lambda *= 9.0;
    const auto e = derive_scales(q);
    CHECK(e.v == doctest::Approx(3.0 * d.v));
    CHECK(e.R_c == doctest::Approx(3.0 * d.R_c));
}

TEST_CASE("non-positive parameters are rejected by name") {
    PhysicalParams p;
    p.g = 0.0;
    try {
        derive_scales(p);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("'g'") != std::string::npos);
    }
    p = {};
    p.beta = -1.0;
    CHECK_THROWS_AS(derive_scales(p), DomainError);
}

TEST_CASE("Thomas-Fermi density") {
    PhysicalParams p;
    p.Omega = std::sqrt(2.0);  // R_c = 1
    const auto d = derive_scales(p);
    REQUIRE(d.R_c == doctest::Approx(1.0));
    CHECK(rho_tf(0.0, p, d) == doctest::Approx(p.Lambda / p.g));
    CHECK(rho_tf(0.5, p, d) == doctest::Approx(0.75));
    CHECK(rho_tf(1.5 * d.R_c, p, d) == 0.0);
    CHECK(rho_tf(-d.R_c, p, d) == 0.0);
    for (double x = -1.2; x <= 1.2; x += 0.05) {
        CHECK(rho_tf(x, p, d) == rho_tf(-x, p, d));
        CHECK(rho_tf(x, p, d) <= rho_tf(0.0, p, d));
    }
}

TEST_CASE("Thomas-Fermi norm by quadrature") {
    PhysicalParams p{1.0, 1.0, 0.5, 0.8, 2.0, 1.0};
    const auto d = derive_scales(p);
    const int n = 20000;
    const double h = 2.0 * d.R_c / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rho_tf(-d.R_c + (i + 0.5) * h, p, d) * h;
    CHECK(sum == doctest::Approx(4.0 / 3.0 * p.Lambda / p.g * d.R_c).epsilon(1e-7));
}

TEST_CASE("energy levels") {
    const auto d = derive_scales({});  // hbar = Omega = 1
    CHECK(energy_level(0, d) == 0.0);
    CHECK(energy_level(1, d) == doctest::Approx(1.0));
    CHECK(energy_level(2, d) == doctest::Approx(std::sqrt(3.0)));
    CHECK_THROWS_AS(energy_level(-1, d), DomainError);
    for (long n = 0; n < 200; ++n) CHECK(energy_level(n + 1, d) > energy_level(n, d));
    CHECK(energy_level(100000, d) / (100000.0 / d.alpha) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("level spacing expansion") {
    DerivedScales unit;
    unit.alpha = 1.0;
    CHECK(level_spacing_expansion(2, unit).exact == doctest::Approx(std::sqrt(12.0) - std::sqrt(6.0)));
    CHECK(std::abs(level_spacing_expansion(10, unit).difference()) < 2e-4);
    CHECK(level_spacing_expansion(100000, unit).exact == doctest::Approx(1.0).epsilon(1e-9));
    // the remainder is O(n^-4): n^4 * |diff| stays bounded
    double prev = 0.0;
    for (long n : {20L, 40L, 80L, 160L}) {
        const double scaled = std::abs(level_spacing_expansion(n, unit).difference()) * std::pow(n, 4.0);
        if (prev > 0.0) CHECK(scaled == doctest::Approx(prev).epsilon(0.2));
        prev = scaled;
    }
}

TEST_CASE("amplitude ratio has no 1/n term") {
    for (long n : {10L, 20L, 40L, 80L}) {
        const auto r = amplitude_ratio_expansion(n);
        CHECK(std::abs(r.exact - r.expansion) * std::pow(n, 4.0) < 0.2);
    }
}

TEST_CASE("regime classification") {
    DerivedScales d;
    d.regime_ratio = 0.01;
    CHECK(classify_regime(d) == Regime::HighT);
    d.regime_ratio = 100.0;
    CHECK(classify_regime(d) == Regime::LowT);
    d.regime_ratio = 1.0;
    CHECK(classify_regime(d) == Regime::Intermediate);
    CHECK_THROWS_AS(classify_regime(d, {2.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(classify_regime(d, {0.0, 1.0}), ConfigError);
}
