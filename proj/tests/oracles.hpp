#pragma once
// Reference computations that share no code with the library.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Gauss-Legendre on [0,1] from the Jacobi matrix eigenproblem.
inline std::pair<std::vector<double>, std::vector<double>> golub_welsch(int n)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        x[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
        w[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);  // weights on [0,1]: 2 v0^2 / 2
    }
    return {x, w};
}

inline double gauss(const std::function<double(double)>& f, double a, double b, int n)
{
    static thread_local std::vector<std::pair<std::vector<double>, std::vector<double>>> cache(64);
    if (cache[n].first.empty()) cache[n] = golub_welsch(n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += cache[n].second[i] * f(a + (b - a) * cache[n].first[i]);
    return s * (b - a);
}

// Integral from a to b with a log-type singularity at a: Gauss on pieces
// [a + L 4^-(k+1), a + L 4^-k], L = b - a; the last sliver is dropped.
inline double graded(const std::function<double(double)>& f, double a, double b, int levels = 30)
{
    const double L = b - a;
    if (L == 0.0) return 0.0;
    double s = 0.0, hi = 1.0;
    for (int k = 0; k < levels && std::abs(hi * L) > 1e-13 * (1 + std::abs(a)); ++k, hi *= 0.25)
        s += gauss(f, a + 0.25 * hi * L, a + hi * L, 20);
    return s;
}

// Singularities at both ends.
inline double graded_both(const std::function<double(double)>& f, double a, double b)
{
    const double m = 0.5 * (a + b);
    return graded(f, a, m) - graded(f, b, m);
}

// Plane Lame fundamental solution written out from scratch.
inline Eigen::Matrix2d kelvin(const Eigen::Vector2d& z, double lam, double mu)
{
    const double r = z.norm();
    const double a = (lam + 3 * mu) / (4 * M_PI * mu * (lam + 2 * mu));
    const double b = (lam + mu) / (4 * M_PI * mu * (lam + 2 * mu));
    return -a * std::log(r) * Eigen::Matrix2d::Identity() + b * z * z.transpose() / (r * r);
}

inline Eigen::VectorXd random_vector(int n, std::mt19937& g)
{
    std::normal_distribution<double> d;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = d(g);
    return v;
}

}  // namespace oracle
