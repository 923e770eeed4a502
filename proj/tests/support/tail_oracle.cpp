#include "support/tail_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rfa::testing {

namespace {

std::vector<double> binomial_pmf(std::int64_t m, double p)
{
    std::vector<double> pmf(static_cast<std::size_t>(m + 1), 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf[static_cast<std::size_t>(m)] = 1.0;
        return pmf;
    }
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lgm = std::lgamma(static_cast<double>(m) + 1.0);
    for (std::int64_t k = 0; k <= m; ++k) {
        const double lk = lgm - std::lgamma(static_cast<double>(k) + 1.0) - std::lgamma(static_cast<double>(m - k) + 1.0) +
                          static_cast<double>(k) * lp + static_cast<double>(m - k) * lq;
        pmf[static_cast<std::size_t>(k)] = std::exp(lk);
    }
    return pmf;
}

} // namespace

double estimator_miss_probability(const UnitVector& c, std::int64_t m, double delta)
{
    const auto px = binomial_pmf(m, (1.0 + c.x()) / 2.0);
    const auto py = binomial_pmf(m, (1.0 + c.y()) / 2.0);
    const auto pz = binomial_pmf(m, (1.0 + c.z()) / 2.0);
    // below[k] = P(k_z < k), above[k] = P(k_z >= k), each summed from its own tail so that
    // tiny probabilities keep their relative precision.
    std::vector<double> below(pz.size() + 1, 0.0);
    std::vector<double> above(pz.size() + 1, 0.0);
    for (std::size_t k = 0; k < pz.size(); ++k) below[k + 1] = below[k] + pz[k];
    for (std::size_t k = pz.size(); k-- > 0;) above[k] = above[k + 1] + pz[k];

    // Accept iff the angle to c is small enough: dot(v, c) >= tau * |v|.
    const double tau = 1.0 - delta * delta / 2.0;
    const double md = static_cast<double>(m);
    auto comp = [md](std::int64_t k) { return 2.0 * static_cast<double>(k) / md - 1.0; };

    // Count pairs lighter than this as misses outright; their total mass is negligible
    // next to any failure rate the tests look at.
    constexpr double kNegligible = 1e-40;
    double miss = 0.0;
    double skipped = 0.0;
    for (std::int64_t kx = 0; kx <= m; ++kx) {
        const double wx = px[static_cast<std::size_t>(kx)];
        if (wx < kNegligible) {
            skipped += wx;
            continue;
        }
        const double x = comp(kx);
        for (std::int64_t ky = 0; ky <= m; ++ky) {
            const double wy = py[static_cast<std::size_t>(ky)];
            if (wx * wy < kNegligible) {
                skipped += wx * wy;
                continue;
            }
            const double y = comp(ky);
            const double a = x * c.x() + y * c.y();
            const double r2 = x * x + y * y;
            auto score = [&](std::int64_t kz) {
                const double z = comp(kz);
                const double len = std::sqrt(r2 + z * z);
                if (len < 1e-12) return -1.0;
                return (a + z * c.z()) / len;
            };
            // The score is unimodal in z; locate its lattice peak.
            double z_peak = c.z() >= 0.0 ? 1.0 : -1.0;
            if (a > 0.0) z_peak = std::clamp(c.z() * r2 / a, -1.0, 1.0);
            auto k_peak = static_cast<std::int64_t>(std::llround((z_peak + 1.0) * md / 2.0));
            k_peak = std::clamp<std::int64_t>(k_peak, 0, m);
            while (k_peak > 0 && score(k_peak - 1) > score(k_peak)) --k_peak;
            while (k_peak < m && score(k_peak + 1) > score(k_peak)) ++k_peak;
            if (score(k_peak) < tau) {
                miss += wx * wy;
                continue;
            }
            std::int64_t lo = 0;
            std::int64_t hi = k_peak; // first accepted index in [0, k_peak]
            while (lo < hi) {
                const std::int64_t mid = (lo + hi) / 2;
                if (score(mid) >= tau) hi = mid;
                else lo = mid + 1;
            }
            const std::int64_t first = lo;
            lo = k_peak;
            hi = m; // last accepted index in [k_peak, m]
            while (lo < hi) {
                const std::int64_t mid = (lo + hi + 1) / 2;
                if (score(mid) >= tau) lo = mid;
                else hi = mid - 1;
            }
            const std::int64_t last = lo;
            miss += wx * wy * (below[static_cast<std::size_t>(first)] + above[static_cast<std::size_t>(last + 1)]);
        }
    }
    return miss + skipped;
}

double mean_miss_probability(std::span<const UnitVector> directions, std::int64_t m, double delta)
{
    double sum = 0.0;
    for (const auto& c : directions) sum += estimator_miss_probability(c, m, delta);
    return sum / static_cast<double>(directions.size());
}

LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    LineFit f;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double cxy = sxy - sx * sy / n;
    f.slope = cxy / vx;
    f.intercept = (sy - f.slope * sx) / n;
    f.r_squared = vy > 0 ? (cxy * cxy) / (vx * vy) : 1.0;
    return f;
}

} // namespace rfa::testing
