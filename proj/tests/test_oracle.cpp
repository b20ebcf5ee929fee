#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kww/oracle.hpp"
#include "kww/region_map.hpp"

using namespace kww;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
        g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return g;
}

} // namespace

TEST_SUITE("oracle")
{
    TEST_CASE("examples")
    {
        CHECK(rel(oracle::reference_value(TransformKind::Cosine, 1.0, 1.0), 0.5) <= 1e-10);
        CHECK(oracle::reference_value(TransformKind::Cosine, 2.0, 2.0) == doctest::Approx(0.5 * std::sqrt(kPi) * std::exp(-1.0)).epsilon(1e-12));
        CHECK(rel(oracle::reference_value(TransformKind::Sine, 1.0, 0.5), 0.4) <= 1e-10);
    }

    TEST_CASE("closed forms to ten digits")
    {
        for (double w : log_grid(1e-3, 1e3, 50)) {
            CAPTURE(w);
            CHECK(rel(oracle::reference_value(TransformKind::Cosine, 1.0, w), 1.0 / (1.0 + w * w)) <= 1e-10);
            CHECK(rel(oracle::reference_value(TransformKind::Sine, 1.0, w), w / (1.0 + w * w)) <= 1e-10);
        }
        // the Gaussian is resolvable while it stays far above the lobe-sum noise
        for (double w : log_grid(1e-3, 10.0, 50)) {
            CAPTURE(w);
            CHECK(rel(oracle::reference_value(TransformKind::Cosine, 2.0, w),
                      0.5 * std::sqrt(kPi) * std::exp(-0.25 * w * w))
                  <= 1e-10);
        }
    }

    TEST_CASE("self-consistency under a tighter target")
    {
        for (double beta : {0.15, 0.6, 1.3, 1.9}) {
            for (TransformKind kind : {TransformKind::Cosine, TransformKind::Sine}) {
                for (double w : {1e-2, 1.0, 50.0}) {
                    const double omega = w * characteristic_frequency(kind, beta);
                    const double coarse = oracle::reference_value(kind, beta, omega, 1e-9);
                    const double fine = oracle::reference_value(kind, beta, omega, 5e-10);
                    CAPTURE(beta);
                    CAPTURE(omega);
                    CHECK(rel(coarse, fine) <= 1e-9);
                }
            }
        }
    }

    TEST_CASE("Fourier inversion normalization")
    {
        for (double beta : {0.5, 1.0, 2.0}) {
            const double wc = characteristic_frequency(TransformKind::Cosine, beta);
            CAPTURE(beta);
            CHECK(std::fabs(oracle::fourier_inversion_check(beta, log_grid(1e-8 * wc, 1e8 * wc, 4000)) - 1.0)
                  <= 1e-3);
        }
        CHECK_THROWS_AS(oracle::fourier_inversion_check(1.0, {1.0, 2.0}), std::invalid_argument);
    }

    TEST_CASE("request validation")
    {
        CHECK_THROWS_AS(oracle::reference_value(TransformKind::Cosine, 1.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(oracle::reference_value(TransformKind::Cosine, 2.5, 1.0), std::domain_error);
        const oracle::OracleResult r = oracle::reference_transform({TransformKind::Sine, 0.7, 3.0});
        CHECK(r.lobes >= 2);
        CHECK(r.evaluations > 0);
    }
}
