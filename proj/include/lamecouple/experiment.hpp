#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lamecouple/config.hpp"

namespace lamecouple {

struct RunOptions {
    std::filesystem::path out;  // empty: use the config's output directory
    bool dump_matrices = false;
    bool verbose = false;
};

// Exit codes of run().
enum ExitCode { ExitOk = 0, ExitFailure = 1, ExitBadConfig = 2 };

struct RunResult {
    int code = ExitOk;
    std::string message;
    std::vector<VerificationReport> checks;
    std::vector<LevelResult> levels;
};

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt);
// Loads the config and runs it; bad configs give ExitBadConfig.
RunResult run(const std::filesystem::path& config, const RunOptions& opt);

// %.15e, "nan" for NaN.
std::string format_number(double x);
void write_results_csv(std::ostream& os, const std::vector<LevelResult>& rows);
void write_verify_csv(std::ostream& os, const std::vector<VerificationReport>& rows);
void write_matrix_csv(std::ostream& os, const Matrix& a);

// Shipped data file when one exists, else a built-in surface or a path.
SurfaceMesh3 resolve_surface(const std::string& name);

}  // namespace lamecouple
