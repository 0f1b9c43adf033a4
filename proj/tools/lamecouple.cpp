#include <iostream>

#include "CLI11.hpp"
#include "lamecouple/experiment.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"FEM-BEM coupling for nonlinear elasticity transmission problems"};
    std::string config, out;
    lamecouple::RunOptions opt;
    app.add_option("config", config, "experiment config file")->required();
    app.add_option("--out", out, "output directory (overrides the config)");
    app.add_flag("--dump-matrices", opt.dump_matrices, "write V, K, M, W as CSV");
    app.add_flag("--verbose", opt.verbose, "progress on stderr");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : lamecouple::ExitBadConfig;
    }
    opt.out = out;

    lamecouple::RunResult r = lamecouple::run(config, opt);
    if (r.code == lamecouple::ExitBadConfig)
        std::cerr << "lamecouple: bad config: " << r.message << '\n';
    else if (r.code != lamecouple::ExitOk)
        std::cerr << "lamecouple: " << r.message << '\n';
    else if (opt.verbose)
        std::cerr << "lamecouple: ok\n";
    return r.code;
}
