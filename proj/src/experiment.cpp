#include "lamecouple/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace lamecouple {

namespace fs = std::filesystem;

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15e", x);
    return buf;
}

void write_results_csv(std::ostream& os, const std::vector<LevelResult>& rows)
{
    os << "level,h,dofs,err_eps,err_phi,rate_eps,rate_phi,iters\n";
    for (const LevelResult& r : rows)
        os << r.level << ',' << format_number(r.h) << ',' << r.dofs << ',' << format_number(r.err_eps) << ','
           << format_number(r.err_phi) << ',' << format_number(r.rate_eps) << ',' << format_number(r.rate_phi) << ','
           << r.iters << '\n';
}

void write_verify_csv(std::ostream& os, const std::vector<VerificationReport>& rows)
{
    os << "check,status,certificates\n";
    for (const VerificationReport& r : rows) {
        os << r.name << ',' << (r.pass ? "pass" : "fail") << ',';
        for (size_t i = 0; i < r.certificates.size(); ++i)
            os << (i ? ";" : "") << r.certificates[i].first << '=' << format_number(r.certificates[i].second);
        os << '\n';
    }
}

void write_matrix_csv(std::ostream& os, const Matrix& a)
{
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) os << (j ? "," : "") << format_number(a(i, j));
        os << '\n';
    }
}

SurfaceMesh3 resolve_surface(const std::string& name)
{
    const fs::path shipped = fs::path(LAMECOUPLE_DATA_DIR) / (name + ".mesh3");
    if (name.find('/') == std::string::npos && fs::exists(shipped)) return load_surface(shipped.string());
    return load_surface(name);
}

namespace {

struct Context {
    const ExperimentConfig& cfg;
    const RunOptions& opt;
    RunResult res;
    std::ostream& log = std::cerr;

    void say(const std::string& s)
    {
        if (opt.verbose) log << s << '\n';
    }
    // Records the check; false when it failed.
    bool check(VerificationReport r)
    {
        say("  " + r.name + ": " + (r.pass ? "pass" : "fail"));
        res.checks.push_back(std::move(r));
        return res.checks.back().pass;
    }
};

struct CheckFailed {};

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<Mesh> level_meshes(const ExperimentConfig& cfg)
{
    std::vector<Mesh> out;
    out.push_back(build_polygon_mesh(cfg.geometry(), cfg.h));
    for (int l = 2; l <= cfg.levels; ++l) out.push_back(refine_uniform(out.back()));
    return out;
}

double level_h(const ExperimentConfig& cfg, int level) { return cfg.h * std::pow(0.5, level - 1); }

LayerOptions layer_options(const ExperimentConfig& cfg)
{
    LayerOptions lo;
    lo.p1_test = cfg.xi == XiKind::P1Rigid;
    return lo;
}

VerificationReport solver_report(const SolveTrace& t, const SolveOptions& o)
{
    VerificationReport r;
    r.name = "solver_converged";
    r.pass = t.converged;
    r.certificates = {{"iterations", double(t.iterations)},
                      {"residual", t.residuals.empty() ? NAN : t.residuals.back()},
                      {"tol", o.tol}};
    if (o.method == SolverMethod::Picard) r.certificates.push_back({"theta", t.theta});
    return r;
}

void write_fields(const fs::path& dir, const Discretization& d, const CoupledSolution& scaled)
{
    CoupledSolution s = scaled.unscaled(d.scale);
    std::ofstream u(dir / "solution.csv");
    u << "x,y,u1,u2\n";
    for (int i = 0; i < d.mesh->node_count(); ++i) {
        Vec2 x = d.scale.invert(d.mesh->nodes()[i]);
        u << format_number(x.x()) << ',' << format_number(x.y()) << ',' << format_number(s.u[2 * i]) << ','
          << format_number(s.u[2 * i + 1]) << '\n';
    }
    std::ofstream p(dir / "density.csv");
    p << "x,y,phi1,phi2\n";
    for (int k = 0; k < d.boundary->edge_count(); ++k) {
        Vec2 x = d.scale.invert(d.boundary->edge(k).midpoint());
        p << format_number(x.x()) << ',' << format_number(x.y()) << ',' << format_number(s.phi[2 * k]) << ','
          << format_number(s.phi[2 * k + 1]) << '\n';
    }
}

void dump_matrices(const fs::path& dir, const LayerMatrices& l)
{
    const std::pair<const char*, const Matrix*> mats[] = {{"V.csv", &l.V}, {"K.csv", &l.K}, {"M.csv", &l.M}, {"W.csv", &l.W}};
    for (auto [name, a] : mats) {
        std::ofstream os(dir / name);
        write_matrix_csv(os, *a);
    }
}

ManufacturedProblem make_problem(const ExperimentConfig& cfg)
{
    return build_manufactured(cfg.problem, cfg.material(), cfg.lambda_ext, cfg.mu_ext);
}

void run_solve(Context& c, const fs::path& dir)
{
    const ExperimentConfig& cfg = c.cfg;
    ManufacturedProblem p = make_problem(cfg);
    Mesh m = level_meshes(cfg).back();
    Discretization d = discretize(m, cfg.lambda_ext, cfg.mu_ext, layer_options(cfg));
    c.say("solve: " + std::to_string(d.fem->dof_count() + d.boundary->density_dofs()) + " dofs");
    SolveReport s = solve_problem(p, d, cfg.method, cfg.stabilize, cfg.xi, cfg.solver);
    LevelResult r;
    r.level = cfg.levels;
    r.h = level_h(cfg, cfg.levels);
    r.dofs = d.fem->dof_count() + d.boundary->density_dofs();
    r.err_eps = s.err_eps;
    r.err_phi = s.err_phi;
    r.iters = s.trace.iterations;
    r.converged = s.trace.converged;
    c.res.levels.push_back(r);
    write_fields(dir, d, s.solution);
    if (c.opt.dump_matrices) dump_matrices(dir, *d.layers);
    c.check(solver_report(s.trace, cfg.solver));
    if (!s.trace.converged) throw SolverFailure("solver did not converge");
}

void run_converge(Context& c, const fs::path& dir)
{
    const ExperimentConfig& cfg = c.cfg;
    ManufacturedProblem p = make_problem(cfg);
    StudyOptions so;
    so.method = cfg.method;
    so.stabilize = cfg.stabilize;
    so.xi = cfg.xi;
    so.solver = cfg.solver;
    so.polygon = cfg.geometry();
    so.h0 = cfg.h;
    so.levels = cfg.levels;
    c.res.levels = convergence_study(p, so);
    for (const LevelResult& r : c.res.levels)
        c.say("level " + std::to_string(r.level) + " err_eps " + format_number(r.err_eps));
    if (c.opt.dump_matrices) {
        Discretization d = discretize(level_meshes(cfg).back(), cfg.lambda_ext, cfg.mu_ext, layer_options(cfg));
        dump_matrices(dir, *d.layers);
    }

    bool all = true;
    for (const LevelResult& r : c.res.levels) all = all && r.converged;
    VerificationReport s;
    s.name = "solver_converged";
    s.pass = all;
    s.certificates = {{"levels", double(c.res.levels.size())}};
    c.check(s);
    if (!all) throw SolverFailure("solver did not converge on every level");
    if (!p.has_exact()) return;

    const auto& L = c.res.levels;
    if (cfg.problem == "linear-patch") {
        double worst = 0.0;
        for (const LevelResult& r : L) worst = std::max(worst, r.err_eps);
        c.check({"exact_reproduction", worst <= 1e-8, {{"max_err_eps", worst}, {"tol", 1e-8}}, ""});
        return;
    }
    bool mono = true;
    for (size_t i = 1; i < L.size(); ++i) mono = mono && L[i].err_eps < L[i - 1].err_eps;
    c.check({"error_monotone", mono, {{"levels", double(L.size())}}, ""});
    if (L.size() >= 2) {
        const double rate = L.back().rate_eps;
        c.check({"convergence_rate", rate >= 0.9, {{"rate_eps", rate}, {"min_rate", 0.9}}, ""});
    }
}

void run_rbm(Context& c)
{
    int level = 1;
    for (const Mesh& m : level_meshes(c.cfg)) {
        auto [scaled, rec] = scale_to_unit(m);
        VerificationReport r = check_rbm_independence(BoundarySpace(FemSpace(std::make_shared<const Mesh>(scaled))));
        r.name = "rbm_independence";
        r.certificates.push_back({"level", double(level)});
        r.certificates.push_back({"h", level_h(c.cfg, level)});
        c.check(r);
        ++level;
    }
    for (const std::string& name : c.cfg.surfaces) {
        VerificationReport r = check_rbm_independence(resolve_surface(name));
        r.name = "rbm_independence[" + name + "]";
        c.check(r);
    }
}

void run_centroids(Context& c)
{
    for (const std::string& name : c.cfg.surfaces) c.check(check_centroids(resolve_surface(name), "centroid_noncollinear[" + name + "]"));
}

void run_contraction(Context& c, const fs::path& dir)
{
    std::ofstream os(dir / "contraction.csv");
    os << "level,h,c_K_h\n";
    double prev = -INFINITY, worst_drop = 0.0, cmax = 0.0;
    int level = 1;
    bool in_range = true;
    for (const Mesh& m : level_meshes(c.cfg)) {
        auto [scaled, rec] = scale_to_unit(m);
        BoundarySpace bs(FemSpace(std::make_shared<const Mesh>(scaled)));
        ContractionEstimate e = estimate_contraction_constant(bs, c.cfg.lambda_ext, c.cfg.mu_ext);
        os << level << ',' << format_number(level_h(c.cfg, level)) << ',' << format_number(e.c_K_h) << '\n';
        c.say("level " + std::to_string(level) + " c_K_h " + format_number(e.c_K_h));
        in_range = in_range && e.c_K_h > 0.0 && e.c_K_h < 1.0;
        worst_drop = std::max(worst_drop, prev - e.c_K_h);
        prev = e.c_K_h;
        cmax = std::max(cmax, e.c_K_h);
        ++level;
    }
    c.check({"contraction_range", in_range, {{"c_K_h_max", cmax}}, ""});
    c.check({"contraction_monotone", worst_drop <= 1e-3, {{"max_decrease", worst_drop}, {"tol", 1e-3}}, ""});
    JnInputs in;
    in.c_K = cmax;
    in.lambda_ext = c.cfg.lambda_ext;
    in.mu_ext = c.cfg.mu_ext;
    MaterialLaw law = c.cfg.material();
    if (const LinearLame* l = law.linear()) {
        in.lambda_int = l->lambda;
        in.mu_int = l->mu;
        c.check(check_jn_condition(in, JnVariant::Linear));
    } else {
        in.hencky = law;
        c.check(check_jn_condition(in, JnVariant::Hencky));
    }
}

VerificationReport layer_report(const LayerMatrices& L, const BoundarySpace& bs)
{
    const double symV = (L.V - L.V.transpose()).cwiseAbs().maxCoeff() / L.V.cwiseAbs().maxCoeff();
    const double symW = (L.W - L.W.transpose()).cwiseAbs().maxCoeff() / L.W.cwiseAbs().maxCoeff();
    Vector ev = sym_eigenvalues(0.5 * (L.V + L.V.transpose()));
    Vector ew = sym_eigenvalues(0.5 * (L.W + L.W.transpose()));
    const double wmin = ew.minCoeff() / ew.cwiseAbs().maxCoeff();
    VerificationReport r;
    r.name = "layer_operators";
    r.pass = symV <= 1e-12 && symW <= 1e-12 && ev.minCoeff() > 0.0 && wmin >= -1e-10;
    r.certificates = {{"asym_V", symV}, {"asym_W", symW}, {"V_min_eig", ev.minCoeff()}, {"W_min_eig_rel", wmin},
                      {"edges", double(bs.edge_count())}};
    return r;
}

VerificationReport kernel_report(const LayerMatrices& L, const BoundarySpace& bs)
{
    double dl = 0.0, hs = 0.0;
    for (const Vector& r : rigid_traces(bs).xi) {
        dl = std::max(dl, (0.5 * L.M * r + L.K * r).cwiseAbs().maxCoeff());
        hs = std::max(hs, (L.W * r).cwiseAbs().maxCoeff());
    }
    return {"kernel_identity", dl <= 1e-8 && hs <= 1e-8, {{"half_plus_K", dl}, {"W", hs}, {"tol", 1e-8}}, ""};
}

// Unstabilized block annihilates rigid motions in the quadratic form; the
// stabilized symmetric part is positive definite.
std::pair<VerificationReport, VerificationReport> ellipticity_reports(const ExperimentConfig& cfg, const Discretization& d,
                                                                      const ProblemData& data)
{
    CoupledSystem plain = assemble_system(cfg.method, d.fem, d.boundary, d.layers, data, false, cfg.xi);
    CoupledSystem stab = assemble_system(cfg.method, d.fem, d.boundary, d.layers, data, true, cfg.xi);
    const Vector zero = Vector::Zero(plain.size());
    Matrix A = plain.tangent(zero);
    const double anorm = A.norm();
    double worst = 0.0;
    for (const CoefVector& r : rigid_coefficients(*d.fem)) {
        Vector x = Vector::Zero(plain.size());
        x.head(plain.u_size()) = r;
        worst = std::max(worst, std::abs(x.dot(A * x)) / (anorm * x.squaredNorm()));
    }
    Matrix S = stab.tangent(zero);
    const double lmin = sym_eigenvalues(0.5 * (S + S.transpose())).minCoeff();
    return {{"rigid_kernel", worst <= 1e-10, {{"max_rel_form", worst}, {"tol", 1e-10}}, ""},
            {"stabilized_ellipticity", lmin > 0.0, {{"min_eig_sym", lmin}}, ""}};
}

void run_verify(Context& c, const fs::path& dir)
{
    const ExperimentConfig& cfg = c.cfg;
    // Fail fast: stop at the first violated check.
    auto step = [&](VerificationReport r) {
        if (!c.check(std::move(r))) throw CheckFailed{};
    };
    try {
        ManufacturedProblem p = make_problem(cfg);
        MaterialLaw law = cfg.material();
        Mesh m = level_meshes(cfg).back();
        Discretization d = discretize(m, cfg.lambda_ext, cfg.mu_ext, layer_options(cfg));
        if (c.opt.dump_matrices) dump_matrices(dir, *d.layers);

        VerificationReport rbm = check_rbm_independence(*d.boundary);
        rbm.name = "rbm_independence";
        step(rbm);
        for (const std::string& name : cfg.surfaces) {
            SurfaceMesh3 s = resolve_surface(name);
            VerificationReport r = check_rbm_independence(s);
            r.name = "rbm_independence[" + name + "]";
            step(r);
            step(check_centroids(s, "centroid_noncollinear[" + name + "]"));
        }
        step(layer_report(*d.layers, *d.boundary));
        step(kernel_report(*d.layers, *d.boundary));

        MonotonicityConstants th = monotonicity_constants(law);
        MonotonicityConstants sm = sample_monotonicity(law, 2000, cfg.seed);
        step({"material_monotonicity", sm.c_A >= th.c_A * (1.0 - 1e-10) && sm.L_A <= th.L_A * (1.0 + 1e-10),
              {{"c_A", th.c_A}, {"sampled_c_A", sm.c_A}, {"L_A", th.L_A}, {"sampled_L_A", sm.L_A}}, ""});

        ProblemData data = p.data.scaled(d.scale);
        if (law.is_linear()) {
            auto [kern, ell] = ellipticity_reports(cfg, d, data);
            step(kern);
            step(ell);
        }

        ContractionEstimate ce = estimate_contraction_constant(*d.boundary, cfg.lambda_ext, cfg.mu_ext);
        step({"contraction_range", ce.c_K_h > 0.0 && ce.c_K_h < 1.0, {{"c_K_h", ce.c_K_h}}, ""});
        if (cfg.method != Method::Symmetric) {
            JnInputs in;
            in.c_K = ce.c_K_h;
            in.lambda_ext = cfg.lambda_ext;
            in.mu_ext = cfg.mu_ext;
            if (const LinearLame* l = law.linear()) {
                in.lambda_int = l->lambda;
                in.mu_int = l->mu;
                step(check_jn_condition(in, JnVariant::Linear));
            } else {
                in.hencky = law;
                step(check_jn_condition(in, JnVariant::Hencky));
            }
        }

        SolveReport plain = solve_problem(p, d, cfg.method, false, cfg.xi, cfg.solver);
        step(solver_report(plain.trace, cfg.solver));
        SolveReport stab = solve_problem(p, d, cfg.method, true, cfg.xi, cfg.solver);
        VerificationReport sr = solver_report(stab.trace, cfg.solver);
        sr.name = "solver_converged_stabilized";
        step(sr);
        Vector a(plain.solution.u.size() + plain.solution.phi.size()), b(a.size());
        a << plain.solution.u, plain.solution.phi;
        b << stab.solution.u, stab.solution.phi;
        const double rel = (a - b).norm() / std::max(a.norm(), 1e-300);
        if (cfg.xi == XiKind::P0Projected)
            step({"stabilization_equivalence", rel <= 1e-8, {{"rel_diff", rel}, {"tol", 1e-8}}, ""});
        else  // xi outside the density space: agreement only up to discretization error
            step({"stabilization_consistency_p1", rel <= 1e-4, {{"rel_diff", rel}, {"tol", 1e-4}}, ""});

        LevelResult r;
        r.level = cfg.levels;
        r.h = level_h(cfg, cfg.levels);
        r.dofs = d.fem->dof_count() + d.boundary->density_dofs();
        r.err_eps = plain.err_eps;
        r.err_phi = plain.err_phi;
        r.iters = plain.trace.iterations;
        r.converged = plain.trace.converged;
        c.res.levels.push_back(r);
    } catch (const CheckFailed&) {
    }
}

void write_summary(const fs::path& dir, const ExperimentConfig& cfg, const RunResult& res)
{
    std::ofstream os(dir / "summary.txt");
    os << "experiment: " << to_string(cfg.experiment) << '\n'
       << "coupling: " << to_string(cfg.method) << (cfg.stabilize ? " (stabilized)" : "") << '\n'
       << "material: " << cfg.material_kind << '\n'
       << "levels: " << cfg.levels << ", coarse h = " << format_number(cfg.h) << '\n';
    for (const LevelResult& r : res.levels)
        os << "  level " << r.level << "  dofs " << r.dofs << "  err_eps " << format_number(r.err_eps) << "  rate "
           << format_number(r.rate_eps) << "  iters " << r.iters << '\n';
    int failed = 0;
    for (const VerificationReport& r : res.checks) {
        os << (r.pass ? "  [pass] " : "  [FAIL] ") << r.name;
        for (const auto& [k, v] : r.certificates) os << "  " << k << '=' << format_number(v);
        if (!r.note.empty()) os << "  (" << r.note << ')';
        os << '\n';
        failed += !r.pass;
    }
    os << "result: " << (res.code == ExitOk ? "ok" : "failed");
    if (!res.message.empty()) os << " (" << res.message << ')';
    os << ", " << failed << " failed check(s)\n";
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt)
{
    Context c{cfg, opt, {}};
    const fs::path dir = opt.out.empty() ? fs::path(cfg.output) : opt.out;
    try {
        fs::create_directories(dir);
    } catch (const fs::filesystem_error& e) {
        return {ExitBadConfig, e.what(), {}, {}};
    }
    // Geometry, problem and law errors are configuration errors.
    try {
        (void)level_meshes(cfg).front();
        if (cfg.experiment != Experiment::RbmCheck && cfg.experiment != Experiment::CentroidCheck) (void)make_problem(cfg);
        if (cfg.experiment == Experiment::CentroidCheck || cfg.experiment == Experiment::RbmCheck ||
            cfg.experiment == Experiment::Verify)
            for (const std::string& s : cfg.surfaces) (void)resolve_surface(s);
    } catch (const std::exception& e) {
        return {ExitBadConfig, e.what(), {}, {}};
    }

    try {
        c.say(std::string("running ") + to_string(cfg.experiment));
        switch (cfg.experiment) {
        case Experiment::Solve: run_solve(c, dir); break;
        case Experiment::Converge: run_converge(c, dir); break;
        case Experiment::Verify: run_verify(c, dir); break;
        case Experiment::Contraction: run_contraction(c, dir); break;
        case Experiment::RbmCheck: run_rbm(c); break;
        case Experiment::CentroidCheck: run_centroids(c); break;
        }
        for (const VerificationReport& r : c.res.checks)
            if (!r.pass) {
                c.res.code = ExitFailure;
                c.res.message = "check " + r.name + " failed";
                break;
            }
    } catch (const std::exception& e) {
        c.res.code = ExitFailure;
        c.res.message = e.what();
    }

    if (!c.res.levels.empty()) {
        std::ofstream os(dir / "results.csv");
        write_results_csv(os, c.res.levels);
    }
    if (!c.res.checks.empty()) {
        std::ofstream os(dir / "verify.csv");
        write_verify_csv(os, c.res.checks);
    }
    write_summary(dir, cfg, c.res);
    return c.res;
}

RunResult run(const fs::path& config, const RunOptions& opt)
{
    ExperimentConfig cfg;
    try {
        cfg = load_config(config);
    } catch (const ConfigError& e) {
        return {ExitBadConfig, e.what(), {}, {}};
    }
    return run_experiment(cfg, opt);
}

}  // namespace lamecouple
