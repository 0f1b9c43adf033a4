#include "lamecouple/solver.hpp"

#include <random>
#include <stdexcept>

namespace lamecouple {

SolverMethod parse_solver_method(const std::string& s)
{
    if (s == "direct") return SolverMethod::Direct;
    if (s == "picard") return SolverMethod::Picard;
    if (s == "newton") return SolverMethod::Newton;
    throw std::invalid_argument("unknown solver method '" + s + "'");
}

PicardConstants sample_picard_constants(const CoupledSystem& sys, const LuFactor& p, int samples, unsigned seed)
{
    // energy inner product and a ball around the first chord iterate
    const Matrix e = energy_gram(sys, project_rbm(sys.boundary()));
    const Vector center = p.solve(sys.rhs());
    auto enorm = [&](const Vector& v) { return std::sqrt(std::max(0.0, v.dot(e * v))); };
    const double radius = std::max(enorm(center), 1e-3);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int n = sys.size();
    auto draw = [&] {
        Vector v(n);
        for (int k = 0; k < n; ++k) v[k] = nd(rng);
        return Vector(center + radius * v / enorm(v));
    };
    PicardConstants c{INFINITY, 0.0};
    for (int i = 0; i < samples; ++i) {
        Vector x = draw(), y = draw();
        Vector d = x - y;
        Vector fd = p.solve(Vector(sys.apply(x) - sys.apply(y)));
        const double n2 = d.dot(e * d);
        c.c_mon = std::min(c.c_mon, fd.dot(e * d) / n2);
        c.c_lip = std::max(c.c_lip, enorm(fd) / std::sqrt(n2));
    }
    return c;
}

std::pair<CoupledSolution, SolveTrace> solve(const CoupledSystem& sys, const SolveOptions& opts)
{
    if (!(opts.tol > 0.0) || opts.max_iter < 1) throw std::invalid_argument("solve: tol > 0 and max_iter >= 1 required");
    const int n = sys.size();
    SolveTrace tr;
    Vector x = Vector::Zero(n);
    const Vector f = sys.rhs();
    Vector r = sys.apply(x) - f;
    tr.residuals.push_back(r.norm());

    switch (opts.method) {
    case SolverMethod::Direct: {
        if (!sys.law().is_linear()) throw std::invalid_argument("direct solver requires a linear material law");
        LuFactor lu(sys.tangent(x));
        x = lu.solve(f);
        r = sys.apply(x) - f;
        tr.residuals.push_back(r.norm());
        tr.iterations = 1;
        tr.converged = tr.residuals.back() <= opts.tol * std::max(1.0, f.norm());
        break;
    }
    case SolverMethod::Newton: {
        while (tr.residuals.back() > opts.tol && tr.iterations < opts.max_iter) {
            LuFactor lu(sys.tangent(x));
            x -= lu.solve(r);
            r = sys.apply(x) - f;
            tr.residuals.push_back(r.norm());
            ++tr.iterations;
        }
        tr.converged = tr.residuals.back() <= opts.tol;
        break;
    }
    case SolverMethod::Picard: {
        LuFactor p(sys.tangent(x));
        if (opts.theta) {
            tr.theta = *opts.theta;
        } else {
            PicardConstants c = sample_picard_constants(sys, p, opts.samples, opts.seed);
            tr.c_mon = c.c_mon;
            tr.c_lip = c.c_lip;
            tr.theta = c.c_mon / (c.c_lip * c.c_lip);
        }
        if (!(tr.theta > 0.0)) throw std::invalid_argument("Picard damping must be positive");
        while (tr.residuals.back() > opts.tol && tr.iterations < opts.max_iter) {
            x -= tr.theta * p.solve(r);
            r = sys.apply(x) - f;
            tr.residuals.push_back(r.norm());
            ++tr.iterations;
        }
        tr.converged = tr.residuals.back() <= opts.tol;
        break;
    }
    }
    return {sys.unpack(x), tr};
}

}  // namespace lamecouple
