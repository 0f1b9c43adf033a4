#include <benchmark/benchmark.h>

#include "lamecouple/analysis.hpp"

using namespace lamecouple;

namespace {

std::shared_ptr<const FemSpace> square_space(double h)
{
    auto [m, rec] = scale_to_unit(build_polygon_mesh(unit_square_polygon(), h));
    return std::make_shared<const FemSpace>(std::make_shared<const Mesh>(m));
}

const MaterialLaw& hencky_law()
{
    static const MaterialLaw law(Hencky{5.0, parse_shear_profile("rational(2,1)"), 1.875, 1.0});
    return law;
}

CoefVector some_displacement(const FemSpace& sp)
{
    return interpolate(sp, [](const Vec2& x) { return Vec2(0.3 * x.x() * x.y(), std::sin(x.x()) - 0.2 * x.y()); });
}

void BM_tangent_parallel(benchmark::State& st)
{
    auto sp = square_space(1.0 / st.range(0));
    CoefVector u = some_displacement(*sp);
    for (auto _ : st) benchmark::DoNotOptimize(assemble_tangent_matrix(*sp, hencky_law(), u));
    st.counters["elements"] = sp->mesh().triangle_count();
}

void BM_tangent_serial(benchmark::State& st)
{
    auto sp = square_space(1.0 / st.range(0));
    CoefVector u = some_displacement(*sp);
    for (auto _ : st) benchmark::DoNotOptimize(assemble_tangent_matrix_serial(*sp, hencky_law(), u));
    st.counters["elements"] = sp->mesh().triangle_count();
}

void BM_residual_parallel(benchmark::State& st)
{
    auto sp = square_space(1.0 / st.range(0));
    CoefVector u = some_displacement(*sp);
    for (auto _ : st) benchmark::DoNotOptimize(assemble_nonlinear_form(*sp, hencky_law(), u));
}

void BM_residual_serial(benchmark::State& st)
{
    auto sp = square_space(1.0 / st.range(0));
    CoefVector u = some_displacement(*sp);
    for (auto _ : st) benchmark::DoNotOptimize(assemble_nonlinear_form_serial(*sp, hencky_law(), u));
}

void layers(benchmark::State& st, bool parallel)
{
    auto sp = square_space(1.0 / st.range(0));
    BoundarySpace bs(*sp);
    LayerOptions opt;
    opt.parallel = parallel;
    for (auto _ : st) benchmark::DoNotOptimize(assemble_layer_matrices(bs, 1.0, 1.0, opt));
    st.counters["panels"] = bs.edge_count();
}

void BM_layers_parallel(benchmark::State& st) { layers(st, true); }
void BM_layers_serial(benchmark::State& st) { layers(st, false); }

}  // namespace

BENCHMARK(BM_tangent_parallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tangent_serial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_residual_parallel)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_residual_serial)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_layers_parallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_layers_serial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
