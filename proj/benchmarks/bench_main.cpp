#include <benchmark/benchmark.h>

#include "topogen/analysis.hpp"
#include "topogen/approximation.hpp"
#include "topogen/automaton.hpp"
#include "topogen/corpus.hpp"
#include "topogen/exact_geometry.hpp"
#include "topogen/multi_address.hpp"

namespace {

using namespace topogen;

const Automaton& fixture(const std::string& name) {
    static std::map<std::string, Automaton> cache;
    auto it = cache.find(name);
    if (it == cache.end())
        it = cache.emplace(name, compile(*corpus_entry(name).automaton)).first;
    return it->second;
}

void bm_accept_address_pair(benchmark::State& state) {
    const Automaton& a = fixture("square_complete");
    auto s = PreperiodicAddress::parse("01(23)");
    auto t = PreperiodicAddress::parse("10(32)");
    for (auto _ : state) benchmark::DoNotOptimize(accept_address_pair(a, s, t));
}
BENCHMARK(bm_accept_address_pair);

void bm_class_of(benchmark::State& state) {
    const Automaton& a = fixture("triangle");
    auto s = PreperiodicAddress::parse("0(1)");
    for (auto _ : state) benchmark::DoNotOptimize(class_of(a, s));
}
BENCHMARK(bm_class_of);

void bm_family_square(benchmark::State& state) {
    const Automaton& a = fixture("square_complete");
    for (auto _ : state) benchmark::DoNotOptimize(compute_family(a));
}
BENCHMARK(bm_family_square);

void bm_neighbor_graph_binary(benchmark::State& state) {
    const IfsSystem& ifs = *corpus_entry("binary").ifs;
    for (auto _ : state) benchmark::DoNotOptimize(neighbor_graph(ifs));
}
BENCHMARK(bm_neighbor_graph_binary);

void bm_build_space(benchmark::State& state) {
    const Automaton& a = fixture("square_complete");
    FamilyResult fam = compute_family(a);
    for (auto _ : state) benchmark::DoNotOptimize(build_space(fam, 2));
}
BENCHMARK(bm_build_space);

}  // namespace

BENCHMARK_MAIN();
