#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstdlib>
#include <fstream>

#include "kww/kww.h"
#include "kww/kww.hpp"
#include "kww/oracle.hpp"

using namespace kww;

namespace {

constexpr double kDelta = kDefaultDelta;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

} // namespace

TEST_SUITE("api")
{
    TEST_CASE("examples")
    {
        CHECK(rel(cosine(1.0, 1.0).value, 0.5) <= kDelta);
        const EvalResult zero = cosine(0.0, 0.8);
        CHECK(zero.value == doctest::Approx(1.1330031).epsilon(1e-7));
        CHECK(zero.method == Method::ClosedForm);
        CHECK(sine(0.0, 0.8).value == 0.0);
        CHECK(cosine(-3.0, 0.7).value == cosine(3.0, 0.7).value);
        CHECK(sine(-3.0, 0.7).value == -sine(3.0, 0.7).value);
    }

    TEST_CASE("errors")
    {
        try {
            cosine(1.0, 0.05);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BetaOutOfRange);
        }
        CHECK_THROWS_AS(cosine(1.0, 2.01), Error);
        try {
            sine(std::nan(""), 1.0);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EvaluationFailed);
        }
        CHECK_THROWS_AS(cosine(INFINITY, 1.0), Error);
    }

    TEST_CASE("results carry provenance and a certified bound")
    {
        for (double beta : {0.2, 0.9, 1.6, 1.95}) {
            for (double omega : {1e-3, 0.5, 3.0, 1e3}) {
                for (TransformKind kind : {TransformKind::Cosine, TransformKind::Sine}) {
                    const EvalResult r = evaluate(kind, omega, beta);
                    CAPTURE(beta);
                    CAPTURE(omega);
                    CHECK(r.certified_bound <= kDelta);
                    CHECK(r.evaluations <= 4000);
                    CHECK(rel(r.value, oracle::reference_value(kind, beta, omega)) <= 1.2e-7);
                }
            }
        }
        CHECK(cosine(1e-3, 1.0).method == Method::SmallSeries);
        CHECK(cosine(1e3, 1.0).method == Method::LargeSeries);
        CHECK(cosine(5.0, 2.0).method == Method::ClosedForm);
        CHECK(cosine(10.0, 1.95).method == Method::QuadratureSubtracted);
        CHECK(to_string(Method::Quadrature) == "quadrature");
    }

    TEST_CASE("fallback after a misprediction")
    {
        // a table that sends everything to the small-omega series
        const RegionTable t = parse_region_table(std::string("#kww-region-table v1 delta=1.1920929e-07\n"
                                                             "0.1\t100\tNA\t100\tNA\n"
                                                             "2\t100\tNA\t100\tNA\n"));
        const EvalResult r = evaluate(TransformKind::Cosine, 1e3, 0.5, {kDelta, &t});
        CHECK(r.predicted == MethodHint::TrySmallSeries);
        CHECK(r.method != Method::SmallSeries);
        CHECK(rel(r.value, oracle::reference_value(TransformKind::Cosine, 0.5, 1e3)) <= kDelta);
    }

    TEST_CASE("scaling")
    {
        CHECK(rel(scaled(TransformKind::Cosine, 0.5, 1.0, 2.0), 1.0) <= kDelta);
        CHECK(scaled(TransformKind::Sine, 0.0, 0.6, 3.0) == 0.0);
        CHECK(rel(scaled(TransformKind::Cosine, 10.0, 0.5, 3.0),
                  3.0 * oracle::reference_value(TransformKind::Cosine, 0.5, 30.0))
              <= kDelta);
        for (double tau : {0.01, 0.7, 13.0})
            CHECK(scaled(TransformKind::Sine, 0.3, 1.3, tau) == tau * sine(tau * 0.3, 1.3).value);
        CHECK_THROWS_AS(scaled(TransformKind::Cosine, 1.0, 1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(scaled(TransformKind::Cosine, 1.0, 1.0, -2.0), std::invalid_argument);
    }

    TEST_CASE("susceptibility")
    {
        const std::complex<double> a = susceptibility(1.0, 1.0, 1.0);
        CHECK(a.real() == doctest::Approx(0.5).epsilon(1e-7));
        CHECK(a.imag() == doctest::Approx(0.5).epsilon(1e-7));
        const std::complex<double> z = susceptibility(0.0, 0.4, 2.0);
        CHECK(z.real() == 1.0);
        CHECK(z.imag() == 0.0);
        const std::complex<double> h = susceptibility(2.0, 0.5, 1.0);
        CHECK(rel(h.real(), 1.0 - 2.0 * oracle::reference_value(TransformKind::Sine, 0.5, 2.0)) <= 2 * kDelta);
        CHECK(rel(h.imag(), 2.0 * oracle::reference_value(TransformKind::Cosine, 0.5, 2.0)) <= kDelta);
    }

    TEST_CASE("C entry points")
    {
        CHECK(kww_cos(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-7));
        CHECK(kww_sin(0.5, 1.0) == doctest::Approx(0.4).epsilon(1e-7));
        CHECK(kww_cosf(1.0f, 1.0f) == doctest::Approx(0.5f).epsilon(1e-6));
        CHECK(kww_sinf(-0.5f, 1.0f) == doctest::Approx(-0.4f).epsilon(1e-6));
        CHECK(std::isnan(kww_cos(1.0, 0.01)));
        CHECK(std::isnan(kww_sin(NAN, 1.0)));
    }
}
