#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lumitact/photometry.hpp"

using namespace lumitact;

namespace {

PhotometricParams wide()
{
    PhotometricParams p;
    p.source_intensity = 1.0;
    p.emit_half_angle = 1.5;
    p.accept_half_angle = 1.5;
    return p;
}

const Vec3 kDown(0, 0, -1);
const SensorPose kOrigin{Vec3::Zero(), Vec3::UnitZ()};

}  // namespace

TEST_SUITE("photometry")
{
    TEST_CASE("on-axis closed form and inverse square")
    {
        CHECK(illuminance({0, 0, 0.5}, kDown, kOrigin, wide()) == doctest::Approx(4.0).epsilon(1e-15));
        const double e1 = illuminance({0, 0, 1.0}, kDown, kOrigin, wide());
        CHECK(e1 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(e1 == doctest::Approx(illuminance({0, 0, 0.5}, kDown, kOrigin, wide()) / 4.0).epsilon(1e-15));
        for (double d : {0.01, 0.05, 0.3, 1.0, 2.5, 10.0}) {
            const double e = illuminance({0, 0, d}, kDown, kOrigin, wide());
            CHECK(std::abs(e * d * d - 1.0) <= 1e-12);
        }
    }

    TEST_CASE("aperture rejects an off-axis source")
    {
        PhotometricParams p;
        CHECK(p.accept_half_angle == doctest::Approx(std::atan(0.3)).epsilon(1e-15));
        CHECK(illuminance({0.04, 0, 0.1}, kDown, kOrigin, p) == 0.0);
        p.ambient_floor = 0.25;
        CHECK(illuminance({0.04, 0, 0.1}, kDown, kOrigin, p) == 0.25);
    }

    TEST_CASE("cone gating returns exactly the floor")
    {
        PhotometricParams p;
        p.ambient_floor = 0.003;
        // Emission cone: LED tilted away from the sensor.
        const Vec3 tilted = Vec3(std::sin(1.2), 0, -std::cos(1.2));
        CHECK(illuminance({0, 0, 0.3}, tilted, kOrigin, p) == 0.003);
        // Acceptance cone, for a range of lateral offsets beyond the aperture.
        for (double x = 0.031; x < 0.2; x += 0.01)
            CHECK(illuminance({x, 0, 0.1}, kDown, kOrigin, p) == 0.003);
        // Just inside the aperture the LED contributes.
        CHECK(illuminance({0.029, 0, 0.1}, kDown, kOrigin, p) > 0.003);
    }

    TEST_CASE("strictly decreasing in distance at fixed angles")
    {
        const Vec3 dir = Vec3(0.1, 0.05, 1.0).normalized();
        double prev = std::numeric_limits<double>::infinity();
        for (double d = 0.05; d < 3.0; d += 0.05) {
            const double e = illuminance(dir * d, kDown, kOrigin, wide());
            CHECK(e < prev);
            CHECK(e > 0.0);
            prev = e;
        }
        // Continuity: tiny change in D gives a tiny change in E.
        const double a = illuminance(dir * 0.5, kDown, kOrigin, wide());
        const double b = illuminance(dir * (0.5 + 1e-9), kDown, kOrigin, wide());
        CHECK(std::abs(a - b) < 1e-7);
    }

    TEST_CASE("cosine foreshortening inside the emission cone")
    {
        const double theta = 0.3;
        const Vec3 axis(std::sin(theta), 0, -std::cos(theta));
        const double e = illuminance({0, 0, 1.0}, axis, kOrigin, wide());
        CHECK(e == doctest::Approx(std::cos(theta)).epsilon(1e-14));
    }

    TEST_CASE("photocurrent")
    {
        PhotometricParams p;
        p.saturation_current = 10.0;
        p.responsivity = 1.0;
        CHECK(photocurrent(0.0, p) == 0.0);
        CHECK(photocurrent(5.0, p) == doctest::Approx(0.5));
        CHECK(photocurrent(25.0, p) == 1.0);
        double prev = 0.0;
        for (double e = 0.0; e < 30.0; e += 0.25) {
            const double i = photocurrent(e, p);
            CHECK(i >= prev);
            CHECK(i >= 0.0);
            CHECK(i <= 1.0);
            // Linear below the single breakpoint at E = 10, flat above.
            CHECK(i == doctest::Approx(std::min(e / 10.0, 1.0)).epsilon(1e-15));
            prev = i;
        }
        CHECK_THROWS_AS(photocurrent(-1.0, p), DomainError);
    }

    TEST_CASE("defaults saturate on axis at 0.1 m")
    {
        PhotometricParams p;
        CHECK(photocurrent(illuminance({0, 0, 0.1}, kDown, kOrigin, p), p) == doctest::Approx(1.0));
        CHECK(photocurrent(illuminance({0, 0, 0.2}, kDown, kOrigin, p), p) == doctest::Approx(0.25));
    }

    TEST_CASE("parameter validation")
    {
        PhotometricParams p;
        CHECK_NOTHROW(p.validate());
        p.ambient_floor = 0.0;
        CHECK_NOTHROW(p.validate());
        p.ambient_floor = -0.1;
        CHECK_THROWS_AS(p.validate(), DomainError);
        p = {};
        p.source_intensity = 0.0;
        CHECK_THROWS_AS(p.validate(), DomainError);
        p = {};
        p.emit_half_angle = std::numbers::pi / 2;
        CHECK_THROWS_AS(p.validate(), DomainError);
        p = {};
        p.accept_half_angle = 0.0;
        CHECK_THROWS_AS(p.validate(), DomainError);
        CHECK_THROWS_AS(illuminance(Vec3::Zero(), kDown, kOrigin, PhotometricParams{}), DomainError);
        CHECK_THROWS_AS(illuminance({0, 0, 1}, Vec3(0, 0, -2), kOrigin, PhotometricParams{}), DomainError);
    }
}
