#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamecouple/analysis.hpp"

namespace lamecouple {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Experiment { Solve, Verify, Converge, Contraction, RbmCheck, CentroidCheck };
Experiment parse_experiment(const std::string& s);
const char* to_string(Experiment e);

struct ExperimentConfig {
    Experiment experiment = Experiment::Solve;
    int levels = 1;
    std::string output = "out";
    unsigned seed = 20240611u;

    std::string shape = "square";      // square | lshape | polygon
    std::vector<Vec2> polygon;         // shape = polygon
    double h = 0.25;                   // coarsest target mesh size
    std::vector<std::string> surfaces{"tetra", "cube"};

    std::string material_kind = "linear";
    double lambda = 1.0, mu = 1.0;
    double K = 5.0;
    std::string mu_tilde = "rational(2,1)";
    double alpha = 1.875, beta = 1.0;

    double lambda_ext = 1.0, mu_ext = 1.0;

    Method method = Method::Symmetric;
    bool stabilize = false;
    XiKind xi = XiKind::P0Projected;

    SolveOptions solver;
    std::string problem = "smooth";

    std::vector<Vec2> geometry() const;
    MaterialLaw material() const;
};

// Flat "section.key = value" lines, '#' starts a comment. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace lamecouple
