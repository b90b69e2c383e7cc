#include <benchmark/benchmark.h>

#include "dimer_mirror/chl.hpp"
#include "dimer_mirror/disks.hpp"
#include "dimer_mirror/jacobi.hpp"
#include "dimer_mirror/mirror.hpp"

using namespace dm;

namespace {

void polygonEnumeration(benchmark::State& state)
{
    auto d = torus4();
    int n = int(state.range(0));
    size_t count = 0;
    for (auto _ : state) {
        auto ps = enumerateMidpointPolygons(d, n, {}, 1);
        count = ps.size();
        benchmark::DoNotOptimize(ps.data());
    }
    state.counters["polygons"] = double(count);
}
BENCHMARK(polygonEnumeration)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void deformedSuperpotentialTorus(benchmark::State& state)
{
    auto m = buildMirror(torus4());
    int n = int(state.range(0));
    auto ps = enumerateMidpointPolygons(m.q, n);
    for (auto _ : state) {
        auto w = deformedSuperpotential(m, ps, n);
        benchmark::DoNotOptimize(w.terms().size());
    }
}
BENCHMARK(deformedSuperpotentialTorus)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void centralityMembership(benchmark::State& state)
{
    auto m = buildMirror(torus4());
    int n = int(state.range(0)), cap = int(state.range(1));
    auto ps = enumerateMidpointPolygons(m.q, n);
    auto rel = deformedRelations(m, deformedSuperpotential(m, ps, n));
    auto l = deformedPotential(m, ps, {}, n);
    auto a = NCPoly::of(m.quiver, m.arrow(0), n);
    auto x = l * a - a * l;
    size_t gens = 0;
    for (auto _ : state) {
        auto v = idealMembershipTruncated(x, rel, n, cap);
        gens = v.generators;
        benchmark::DoNotOptimize(v.member);
    }
    state.counters["generators"] = double(gens);
}
BENCHMARK(centralityMembership)->Args({2, 6})->Args({2, 9})->Args({4, 9})->Unit(benchmark::kMillisecond);

void productTablePipeline(benchmark::State& state)
{
    auto m = buildMirror(torus4());
    int n = int(state.range(0));
    auto ps = enumerateMidpointPolygons(m.q, n);
    for (auto _ : state) {
        auto t = productTableFromDisks(m, ps, {}, n);
        auto r = chlRelationsAndPotential(t, m.quiver);
        benchmark::DoNotOptimize(r.potential.terms().size());
    }
}
BENCHMARK(productTablePipeline)->DenseRange(0, 4, 2)->Unit(benchmark::kMillisecond);

void jacobiNormalForm(benchmark::State& state)
{
    auto m = buildMirror(torus4());
    auto l = classicalPotential(m).value;
    for (auto _ : state) {
        JacobiContext jc(m.dual, 16);
        NCPoly acc(m.quiver, 0);
        for (size_t a = 0; a < m.quiver->arrows.size(); ++a) {
            auto x = NCPoly::of(m.quiver, m.arrow(int(a)), 0);
            acc += jc.normalForm(l * x - x * l).value;
        }
        benchmark::DoNotOptimize(acc.terms().size());
    }
}
BENCHMARK(jacobiNormalForm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
