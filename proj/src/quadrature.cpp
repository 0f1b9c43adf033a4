#include "lamecouple/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace lamecouple {

namespace {

// P_n(z) and P_n'(z) by the three-term recurrence.
std::pair<double, double> legendre(int n, double z)
{
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
}

Rule1D build_gauss(int n)
{
    Rule1D r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(n, z);
            double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double dp = legendre(n, z).second;
        r.x[n - 1 - i] = 0.5 * (z + 1.0);
        r.w[n - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
}

}  // namespace

const Rule1D& gauss_legendre(int n)
{
    if (n < 1 || n > 128) throw std::invalid_argument("gauss_legendre: order out of range");
    static std::mutex m;
    static std::map<int, Rule1D> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss(n)).first;
    return it->second;
}

const TriRule& triangle_rule_deg5()
{
    static const TriRule rule = [] {
        TriRule r;
        const double s15 = std::sqrt(15.0);
        const double a1 = (9.0 - 2.0 * s15) / 21.0, b1 = (6.0 + s15) / 21.0;
        const double a2 = (9.0 + 2.0 * s15) / 21.0, b2 = (6.0 - s15) / 21.0;
        const double w1 = (155.0 + s15) / 1200.0, w2 = (155.0 - s15) / 1200.0;
        r.bary.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
        r.w.push_back(0.225);
        for (auto [a, b, w] : {std::tuple{a1, b1, w1}, std::tuple{a2, b2, w2}}) {
            r.bary.push_back({a, b, b});
            r.bary.push_back({b, a, b});
            r.bary.push_back({b, b, a});
            for (int k = 0; k < 3; ++k) r.w.push_back(w);
        }
        return r;
    }();
    return rule;
}

}  // namespace lamecouple
