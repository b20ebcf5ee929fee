#include "kww/oracle.hpp"

#include <quadmath.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kww/kww.hpp"

namespace kww::oracle {

namespace {

using Quad = __float128;

constexpr int kOrder = 20;
constexpr int kMaxDepth = 40;
constexpr int kMaxLobes = 600;
constexpr int kMaxAveraging = 48;
constexpr int kStableEstimates = 3;
// Lower end of the log-substituted first lobe, relative to its upper end.
constexpr double kFirstLobeDepth = 104.0;  // e^-104 ~ 1e-45
constexpr double kPanelWidth = 4.0;

const Quad kQuadPi = 4 * atanq(Quad(1));

struct GaussLegendre {
    std::array<Quad, kOrder> node{};
    std::array<Quad, kOrder> weight{};

    GaussLegendre()
    {
        for (int i = 0; i < kOrder; ++i) {
            Quad x = cosq(kQuadPi * (i + Quad(0.75)) / (kOrder + Quad(0.5)));
            Quad dp = 0;
            for (int it = 0; it < 100; ++it) {
                Quad p0 = 1, p1 = x;
                for (int n = 2; n <= kOrder; ++n) {
                    const Quad p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
                    p0 = p1;
                    p1 = p2;
                }
                dp = kOrder * (x * p1 - p0) / (x * x - 1);
                const Quad dx = p1 / dp;
                x -= dx;
                if (fabsq(dx) < Quad(1e-33))
                    break;
            }
            node[i] = x;
            weight[i] = 2 / ((1 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre& rule()
{
    static const GaussLegendre r;
    return r;
}

Quad stretched(Quad t, Quad beta)
{
    if (t == 0)
        return 1;
    return expq(-expq(beta * logq(t)));
}

Quad trig(TransformKind kind, Quad x) { return kind == TransformKind::Cosine ? cosq(x) : sinq(x); }

struct Integrator {
    TransformKind kind;
    Quad beta;
    Quad omega;
    Quad abs_tol;
    long evaluations = 0;

    // In t on a lobe.
    Quad lobe_integrand(Quad t) { return stretched(t, beta) * trig(kind, omega * t); }

    // In u = ln t, for the first lobe.
    Quad log_integrand(Quad u)
    {
        const Quad t = expq(u);
        return t * stretched(t, beta) * trig(kind, omega * t);
    }

    template <class F>
    Quad gauss(F&& g, Quad a, Quad b)
    {
        const GaussLegendre& r = rule();
        const Quad mid = (a + b) / 2;
        const Quad half = (b - a) / 2;
        Quad s = 0;
        for (int i = 0; i < kOrder; ++i)
            s += r.weight[i] * g(mid + half * r.node[i]);
        evaluations += kOrder;
        return s * half;
    }

    template <class F>
    Quad adaptive(F&& g, Quad a, Quad b, Quad whole, int depth)
    {
        const Quad m = (a + b) / 2;
        const Quad left = gauss(g, a, m);
        const Quad right = gauss(g, m, b);
        if (fabsq(left + right - whole) <= abs_tol || depth >= kMaxDepth)
            return left + right;
        return adaptive(g, a, m, left, depth + 1) + adaptive(g, m, b, right, depth + 1);
    }

    Quad integrate_lobe(Quad a, Quad b)
    {
        auto g = [this](Quad t) { return lobe_integrand(t); };
        return adaptive(g, a, b, gauss(g, a, b), 0);
    }

    Quad integrate_first_lobe(Quad t_end)
    {
        auto g = [this](Quad u) { return log_integrand(u); };
        const Quad u_end = logq(t_end);
        Quad sum = 0;
        for (Quad u = u_end - kFirstLobeDepth; u < u_end; u += kPanelWidth) {
            const Quad u_next = fminq(u + kPanelWidth, u_end);
            sum += adaptive(g, u, u_next, gauss(g, u, u_next), 0);
        }
        return sum;
    }
};

// Euler transform of the alternating tail by repeated averaging of the last
// `depth + 1` partial sums.
Quad averaged(const std::vector<Quad>& partial, int depth)
{
    std::vector<Quad> w(partial.end() - depth - 1, partial.end());
    for (int level = 0; level < depth; ++level)
        for (std::size_t i = 0; i + 1 < w.size() - level; ++i)
            w[i] = (w[i] + w[i + 1]) / 2;
    return w.front();
}

} // namespace

OracleResult reference_transform(const OracleRequest& req)
{
    if (!(req.omega > 0.0) || !std::isfinite(req.omega))
        throw std::domain_error("oracle: omega must be finite and positive");
    if (!(req.beta > 0.0 && req.beta <= 2.0))
        throw std::domain_error("oracle: beta outside (0, 2]");

    const Quad omega = req.omega;
    const Quad beta = req.beta;
    const Quad period = kQuadPi / omega;
    // Largest possible lobe: |lobe| <= min(integral of f, 2/omega).
    const double scale = std::min(std::tgamma(1.0 + 1.0 / req.beta), 2.0 / req.omega);
    Integrator in{req.kind, beta, omega, Quad(scale) * Quad(1e-32)};

    // Zeros of cos(omega t) at (j + 1/2) pi/omega, of sin(omega t) at j pi/omega.
    const Quad offset = req.kind == TransformKind::Cosine ? Quad(0.5) : Quad(1.0);
    auto zero = [&](int j) { return (j - 1 + offset) * period; };

    std::vector<Quad> partial;
    partial.push_back(in.integrate_first_lobe(zero(1)));

    Quad previous_estimate = 0;
    int stable = 0;
    for (int j = 1; j <= kMaxLobes; ++j) {
        const Quad a = zero(j);
        const Quad b = zero(j + 1);
        partial.push_back(partial.back() + in.integrate_lobe(a, b));
        const Quad sum = partial.back();

        // f is decreasing, so the lobes alternate with shrinking magnitude and
        // the remainder is below the next lobe, itself <= f(b) * 2/omega.
        const Quad next_lobe_bound = stretched(b, beta) * 2 / omega;
        if (next_lobe_bound <= Quad(0.1 * req.target) * fabsq(sum))
            return {static_cast<double>(sum), j + 1, in.evaluations};

        const int depth = std::min(j, kMaxAveraging);
        const Quad estimate = averaged(partial, depth);
        if (j >= 4 && fabsq(estimate - previous_estimate) <= Quad(0.1 * req.target) * fabsq(estimate)) {
            if (++stable >= kStableEstimates)
                return {static_cast<double>(estimate), j + 1, in.evaluations};
        } else {
            stable = 0;
        }
        previous_estimate = estimate;
    }
    throw std::runtime_error("oracle: lobe series did not settle (beta=" + std::to_string(req.beta)
                             + ", omega=" + std::to_string(req.omega) + ")");
}

double fourier_inversion_check(double beta, const std::vector<double>& grid)
{
    if (grid.size() < 3)
        throw std::invalid_argument("fourier_inversion_check: grid needs at least 3 points");
    std::vector<double> q(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        q[i] = kww::cosine(grid[i], beta).value;

    // [0, w_0]: trapezoid with Q(0)
    const double q0 = kww::cosine(0.0, beta).value;
    double integral = 0.5 * grid.front() * (q0 + q.front());
    // grid: trapezoid in ln(omega) on omega Q(omega)
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double du = std::log(grid[i + 1] / grid[i]);
        integral += 0.5 * du * (grid[i] * q[i] + grid[i + 1] * q[i + 1]);
    }
    // tail: Q ~ omega^-p beyond the grid
    const std::size_t n = grid.size() - 1;
    if (q[n] > 0.0 && q[n - 1] > 0.0) {
        const double p = -std::log(q[n] / q[n - 1]) / std::log(grid[n] / grid[n - 1]);
        if (p > 1.0)
            integral += grid[n] * q[n] / (p - 1.0);
    }
    return 2.0 * integral / kPi;
}

} // namespace kww::oracle
