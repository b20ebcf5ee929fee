#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "kww/oracle.hpp"
#include "kww/region_map.hpp"
#include "kww/series.hpp"

using namespace kww;

namespace {

constexpr double kDelta = kDefaultDelta;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

} // namespace

TEST_SUITE("series")
{
    TEST_CASE("amplitudes at integer gamma arguments")
    {
        CHECK(*amplitude_small(0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(*amplitude_small(1, 0.5) == doctest::Approx(6.0).epsilon(1e-15));
        CHECK(*amplitude_small(0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(*amplitude_large(1, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(*amplitude_large(2, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
        for (double beta : {0.1, 0.7, 1.3, 2.0})
            CHECK(*amplitude_large(0, beta) == 1.0);
    }

    TEST_CASE("log amplitudes agree with direct gamma ratios")
    {
        for (double beta : {0.1, 0.35, 0.8, 1.0, 1.45, 1.9, 2.0}) {
            for (int k = 0; k < 40; ++k) {
                const double a = std::tgamma((k + 1) / beta) / std::tgamma(k + 1.0);
                if (std::isfinite(a) && a > 0.0) {
                    CAPTURE(beta);
                    CAPTURE(k);
                    CHECK(rel(*amplitude_small(k, beta), a) <= 1e-12);
                }
                const double b = std::tgamma(k * beta + 1.0) / std::tgamma(k + 1.0);
                CHECK(*amplitude_large(k, beta) > 0.0);
                CHECK(rel(*amplitude_large(k, beta), b) <= 1e-12);
            }
        }
    }

    TEST_CASE("amplitude overflow is signalled, not returned as infinity")
    {
        CHECK_FALSE(amplitude_small(400, 0.1).has_value());
        CHECK(std::isfinite(log_amplitude_small(400, 0.1)));
    }

    constexpr long double kPiL = 3.141592653589793238462643383279502884L;

    TEST_CASE("complementary exponent keeps the trigonometric prefactors")
    {
        for (double beta = 1.01; beta < 2.0; beta += 0.037) {
            for (int k = 0; k <= 20; ++k) {
                CAPTURE(beta);
                CAPTURE(k);
                // direct form in extended precision; in binary64 the phase alone carries ~k ulps
                const long double phase = static_cast<long double>(k) * beta * (kPiL / 2);
                CHECK(std::fabs(large_sine_factor(k, beta) - static_cast<double>(std::sin(phase))) <= 4 * kWorkingEpsilon);
                CHECK(std::fabs(large_cosine_factor(k, beta) - static_cast<double>(std::cos(phase))) <= 4 * kWorkingEpsilon);
            }
        }
    }

    TEST_CASE("small-omega series")
    {
        CHECK(small_omega_sum(TransformKind::Cosine, {1.0, 0.0}).value == 1.0);
        CHECK(small_omega_sum(TransformKind::Cosine, {0.5, 0.0}).value == doctest::Approx(2.0).epsilon(1e-15));

        const SeriesResult q = small_omega_sum(TransformKind::Cosine, {1.0, 0.5});
        REQUIRE(q.ok());
        CHECK(rel(q.value, 0.8) <= kDelta);
        CHECK(q.bound <= kDelta);
        CHECK(q.terms >= 1);

        const SeriesResult v = small_omega_sum(TransformKind::Sine, {1.0, 0.5});
        REQUIRE(v.ok());
        CHECK(rel(v.value, 0.4) <= kDelta);

        const SeriesResult bad = small_omega_sum(TransformKind::Cosine, {0.5, 10.0});
        REQUIRE_FALSE(bad.ok());
        CHECK(bad.failure->reason == SeriesFailureReason::DivergesBeforeAccuracy);
    }

    TEST_CASE("large-omega series")
    {
        const SeriesResult q = large_omega_sum(TransformKind::Cosine, {1.0, 10.0});
        REQUIRE(q.ok());
        CHECK(rel(q.value, 1.0 / 101.0) <= kDelta);

        const SeriesResult v = large_omega_sum(TransformKind::Sine, {1.0, 10.0});
        REQUIRE(v.ok());
        CHECK(rel(v.value, 10.0 / 101.0) <= kDelta);

        const SeriesResult gauss = large_omega_sum(TransformKind::Cosine, {2.0, 10.0});
        REQUIRE_FALSE(gauss.ok());
        CHECK(gauss.failure->reason == SeriesFailureReason::NotApplicable);

        const SeriesResult half = large_omega_sum(TransformKind::Cosine, {0.5, 100.0});
        REQUIRE(half.ok());
        CHECK(rel(half.value, oracle::reference_value(TransformKind::Cosine, 0.5, 100.0)) <= kDelta);
    }

    TEST_CASE("complementary-exponent sign gives a positive leading term")
    {
        // beta = 1.5: Q ~ sin(1.5 pi/2) Gamma(2.5) omega^-2.5 > 0
        const SeriesResult q = large_omega_sum(TransformKind::Cosine, {1.5, 50.0});
        REQUIRE(q.ok());
        CHECK(q.value > 0.0);
        CHECK(rel(q.value, oracle::reference_value(TransformKind::Cosine, 1.5, 50.0)) <= kDelta);
    }

    TEST_CASE("large-omega leading order")
    {
        for (double beta : {0.3, 0.8, 1.2, 1.7}) {
            // the next term is smaller by a factor of order omega^-beta
            const double omega = std::pow(10.0, 4.0 / beta);
            const SeriesResult q = large_omega_sum(TransformKind::Cosine, {beta, omega});
            REQUIRE(q.ok());
            const double leading = std::sin(beta * kPi / 2) * std::tgamma(1.0 + beta) * std::pow(omega, -1.0 - beta);
            CAPTURE(beta);
            CHECK(rel(q.value, leading) <= 1e-3);
        }
    }

    TEST_CASE("failure reasons")
    {
        // beta = 0.1: the first small-omega amplitudes grow by ~1e17 per term
        const SeriesResult grow = small_omega_sum(TransformKind::Cosine, {0.1, 1e-3});
        REQUIRE_FALSE(grow.ok());
        CHECK(grow.failure->reason == SeriesFailureReason::DivergesBeforeAccuracy);

        // convergent small-omega series at large omega: huge alternating terms
        const SeriesResult cancel = small_omega_sum(TransformKind::Cosine, {1.5, 30.0});
        REQUIRE_FALSE(cancel.ok());
        CHECK(cancel.failure->reason == SeriesFailureReason::CancellationLoss);

        // terms below the normal range before delta is met
        const SeriesResult under = large_omega_sum(TransformKind::Sine, {0.5, 1e300});
        CHECK((under.ok() || under.failure->reason == SeriesFailureReason::TermUnderflow));

        CHECK(to_string(SeriesFailureReason::TermOverflow) == "term-overflow");
    }

    TEST_CASE("small-omega success is monotone in omega")
    {
        for (double beta : {0.4, 0.9, 1.3, 1.8}) {
            for (TransformKind kind : {TransformKind::Cosine, TransformKind::Sine}) {
                bool failed = false;
                for (double x = -12.0; x <= 6.0; x += 0.25) {
                    const bool ok = small_omega_sum(kind, {beta, std::exp2(x)}).ok();
                    CAPTURE(beta);
                    CAPTURE(x);
                    if (failed)
                        CHECK_FALSE(ok);
                    failed = failed || !ok;
                }
            }
        }
    }

    TEST_CASE("truncation bounds hold for forced early truncation")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> beta_dist(0.1, 2.0);
        std::uniform_int_distribution<int> n_dist(1, 8);
        int tested = 0;
        for (int i = 0; i < 60; ++i) {
            const double beta = beta_dist(rng);
            const int n = n_dist(rng);
            const TransformKind kind = i % 2 == 0 ? TransformKind::Cosine : TransformKind::Sine;
            const double ref_small = oracle::reference_value(kind, beta, 0.05);
            const TruncatedSum s = truncated_small_sum(kind, beta, 0.05, n);
            if (s.bound > 1e-9 * std::fabs(ref_small)) {
                ++tested;
                CHECK(std::fabs(s.value - ref_small) <= s.bound);
            }
            if (kind == TransformKind::Cosine && beta == 2.0)
                continue;
            const double ref_large = oracle::reference_value(kind, beta, 20.0);
            const TruncatedSum l = truncated_large_sum(kind, beta, 20.0, n);
            if (l.bound > 1e-9 * std::fabs(ref_large)) {
                ++tested;
                CHECK(std::fabs(l.value - ref_large) <= l.bound);
            }
        }
        CHECK(tested > 20);
    }

    TEST_CASE("parameter validation")
    {
        CHECK_THROWS_AS(small_omega_sum(TransformKind::Cosine, {0.05, 1.0}), std::domain_error);
        CHECK_THROWS_AS(large_omega_sum(TransformKind::Cosine, {1.0, 0.0}), std::domain_error);
        CHECK_THROWS_AS(small_omega_sum(TransformKind::Cosine, {1.0, -1.0}), std::domain_error);
    }
}
