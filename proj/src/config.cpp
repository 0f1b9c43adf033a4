#include "lamecouple/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lamecouple {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos == v.size()) return int(x);
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// "x y; x y; ..."
std::vector<Vec2> to_polygon(const std::string& key, const std::string& v)
{
    std::vector<Vec2> pts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        std::istringstream is(item);
        double x, y;
        std::string rest;
        if (!(is >> x >> y) || (is >> rest)) throw ConfigError(key + ": bad vertex '" + item + "'");
        pts.emplace_back(x, y);
    }
    if (pts.size() < 3) throw ConfigError(key + ": need at least three vertices");
    return pts;
}

std::vector<std::string> to_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

}  // namespace

Experiment parse_experiment(const std::string& s)
{
    if (s == "solve") return Experiment::Solve;
    if (s == "verify") return Experiment::Verify;
    if (s == "converge") return Experiment::Converge;
    if (s == "contraction") return Experiment::Contraction;
    if (s == "rbm-check") return Experiment::RbmCheck;
    if (s == "centroid-check") return Experiment::CentroidCheck;
    throw ConfigError("unknown experiment '" + s + "'");
}

const char* to_string(Experiment e)
{
    switch (e) {
    case Experiment::Solve: return "solve";
    case Experiment::Verify: return "verify";
    case Experiment::Converge: return "converge";
    case Experiment::Contraction: return "contraction";
    case Experiment::RbmCheck: return "rbm-check";
    case Experiment::CentroidCheck: return "centroid-check";
    }
    return "?";
}

std::vector<Vec2> ExperimentConfig::geometry() const
{
    if (shape == "square") return unit_square_polygon();
    if (shape == "lshape") return lshape_polygon();
    return polygon;
}

MaterialLaw ExperimentConfig::material() const
{
    if (material_kind == "linear") return MaterialLaw(LinearLame{lambda, mu});
    return MaterialLaw(Hencky{K, parse_shear_profile(mu_tilde), alpha, beta});
}

ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> keys = {
        {"experiment", [&](auto&, auto& v) { c.experiment = parse_experiment(v); }},
        {"levels", [&](auto& k, auto& v) { c.levels = to_int(k, v); }},
        {"output", [&](auto&, auto& v) { c.output = v; }},
        {"seed", [&](auto& k, auto& v) { c.seed = unsigned(to_int(k, v)); }},
        {"geometry.shape", [&](auto& k, auto& v) {
             if (v != "square" && v != "lshape" && v != "polygon")
                 throw ConfigError(k + ": expected square, lshape or polygon");
             c.shape = v;
         }},
        {"geometry.polygon", [&](auto& k, auto& v) { c.polygon = to_polygon(k, v); }},
        {"geometry.h", [&](auto& k, auto& v) { c.h = to_double(k, v); }},
        {"geometry.surface", [&](auto&, auto& v) { c.surfaces = to_list(v); }},
        {"material.kind", [&](auto& k, auto& v) {
             if (v != "linear" && v != "hencky") throw ConfigError(k + ": expected linear or hencky");
             c.material_kind = v;
         }},
        {"material.lambda", [&](auto& k, auto& v) { c.lambda = to_double(k, v); }},
        {"material.mu", [&](auto& k, auto& v) { c.mu = to_double(k, v); }},
        {"material.K", [&](auto& k, auto& v) { c.K = to_double(k, v); }},
        {"material.mu_tilde", [&](auto&, auto& v) { c.mu_tilde = v; }},
        {"material.alpha", [&](auto& k, auto& v) { c.alpha = to_double(k, v); }},
        {"material.beta", [&](auto& k, auto& v) { c.beta = to_double(k, v); }},
        {"exterior.lambda", [&](auto& k, auto& v) { c.lambda_ext = to_double(k, v); }},
        {"exterior.mu", [&](auto& k, auto& v) { c.mu_ext = to_double(k, v); }},
        {"coupling.method", [&](auto&, auto& v) { c.method = parse_method(v); }},
        {"coupling.stabilize", [&](auto& k, auto& v) { c.stabilize = to_bool(k, v); }},
        {"coupling.xi", [&](auto& k, auto& v) {
             if (v == "p0-projected") c.xi = XiKind::P0Projected;
             else if (v == "p1-rigid") c.xi = XiKind::P1Rigid;
             else throw ConfigError(k + ": expected p0-projected or p1-rigid");
         }},
        {"solver.method", [&](auto&, auto& v) { c.solver.method = parse_solver_method(v); }},
        {"solver.tol", [&](auto& k, auto& v) { c.solver.tol = to_double(k, v); }},
        {"solver.max_iter", [&](auto& k, auto& v) { c.solver.max_iter = to_int(k, v); }},
        {"solver.theta", [&](auto& k, auto& v) { c.solver.theta = to_double(k, v); }},
        {"solver.samples", [&](auto& k, auto& v) { c.solver.samples = to_int(k, v); }},
        {"problem.name", [&](auto&, auto& v) { c.problem = v; }},
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        try {
            it->second(key, value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }

    if (c.levels < 1) throw ConfigError("levels must be at least 1");
    if (!(c.h > 0.0)) throw ConfigError("geometry.h must be positive");
    if (c.shape == "polygon" && c.polygon.empty()) throw ConfigError("geometry.shape = polygon needs geometry.polygon");
    if (!(c.lambda_ext > 0.0) || !(c.mu_ext > 0.0)) throw ConfigError("exterior moduli must be positive");
    if (!(c.solver.tol > 0.0) || c.solver.max_iter < 1) throw ConfigError("bad solver tolerance or iteration limit");
    if (c.material_kind == "hencky" && c.solver.method == SolverMethod::Direct)
        throw ConfigError("solver.method = direct needs a linear material");
    if (c.surfaces.empty()) throw ConfigError("geometry.surface is empty");
    try {
        (void)c.material();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("material: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    return parse_config(in);
}

}  // namespace lamecouple
