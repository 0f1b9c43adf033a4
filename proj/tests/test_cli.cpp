#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("lamecouple_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args)
{
    std::string cmd = std::string(LAMECOUPLE_CLI) + " " + args + " > /dev/null 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string config(const std::string& name) { return std::string(LAMECOUPLE_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p)
{
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

fs::path write_config(const fs::path& dir, const std::string& text)
{
    fs::path p = dir / "case.cfg";
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("rbm-check")
{
    fs::path out = scratch("rbm");
    REQUIRE(run(config("rbm_square.cfg") + " --out " + out.string()) == 0);
    auto rows = csv(out / "verify.csv");
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0] == std::vector<std::string>{"check", "status", "certificates"});
    CHECK(rows[1][0] == "rbm_independence");
    CHECK(rows[1][1] == "pass");
    CHECK(rows[1][2].rfind("sigma_min=", 0) == 0);
    CHECK(fs::exists(out / "summary.txt"));
    fs::remove_all(out);
}

TEST_CASE("centroid-check")
{
    fs::path out = scratch("centroid");
    REQUIRE(run(config("centroid_tetra.cfg") + " --out " + out.string()) == 0);
    std::string v = slurp(out / "verify.csv");
    CHECK(v.find("centroid_noncollinear[tetra],pass") != std::string::npos);
    CHECK(v.find("centroid_noncollinear[cube],pass") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("converge writes one row per level and is deterministic")
{
    fs::path a = scratch("conv_a"), b = scratch("conv_b");
    REQUIRE(run(config("converge_symmetric.cfg") + " --out " + a.string()) == 0);
    REQUIRE(run(config("converge_symmetric.cfg") + " --out " + b.string()) == 0);
    auto rows = csv(a / "results.csv");
    REQUIRE(rows.size() == 5);
    CHECK(rows[0][0] == "level");
    CHECK(rows[0].size() == 8);
    for (size_t k = 2; k < rows.size(); ++k) CHECK(std::stod(rows[k][3]) < std::stod(rows[k - 1][3]));
    CHECK(std::stod(rows[4][5]) >= 0.9);
    CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("solve with matrix dump")
{
    fs::path out = scratch("solve");
    fs::path cfg = write_config(out, "experiment = solve\ngeometry.h = 0.5\nproblem.name = smooth\n");
    REQUIRE(run(cfg.string() + " --out " + (out / "res").string() + " --dump-matrices") == 0);
    for (const char* f : {"solution.csv", "density.csv", "V.csv", "K.csv", "M.csv", "W.csv", "summary.txt"})
        CHECK(fs::exists(out / "res" / f));
    // V is square with the density dof count
    auto v = csv(out / "res" / "V.csv");
    REQUIRE(!v.empty());
    CHECK(v.size() == v[0].size());
    fs::remove_all(out);
}

TEST_CASE("bad configurations exit with 2")
{
    fs::path out = scratch("bad");
    CHECK(run((out / "missing.cfg").string()) == 2);
    CHECK(run(write_config(out, "experiment = dance\n").string() + " --out " + out.string()) == 2);
    CHECK(run(write_config(out, "geometry.h = -1\n").string() + " --out " + out.string()) == 2);
    CHECK(run(write_config(out, "no_such_key = 1\n").string() + " --out " + out.string()) == 2);
    CHECK(run(write_config(out, "material.kind = hencky\nsolver.method = direct\n").string() + " --out " + out.string()) == 2);
    CHECK(run(write_config(out, "geometry.surface = nowhere\nexperiment = centroid-check\n").string() + " --out " + out.string()) ==
          2);
    CHECK(run("") == 2);
    fs::remove_all(out);
}

TEST_CASE("failed checks exit with 1")
{
    fs::path out = scratch("fail");
    // a solver that cannot converge in one damped step
    fs::path cfg = write_config(out, "experiment = solve\ngeometry.h = 0.5\nproblem.name = hencky-square\n"
                                     "material.kind = hencky\nmaterial.K = 5\nmaterial.mu_tilde = rational(2,1)\n"
                                     "material.alpha = 1.875\nsolver.method = picard\nsolver.max_iter = 1\n");
    CHECK(run(cfg.string() + " --out " + (out / "res").string()) == 1);
    CHECK(slurp(out / "res" / "verify.csv").find("solver_converged,fail") != std::string::npos);
    fs::remove_all(out);
}
