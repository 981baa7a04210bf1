#include <benchmark/benchmark.h>

#include <map>
#include <string>

#include "subseg/clir.hpp"
#include "subseg/metrics.hpp"
#include "subseg/random.hpp"

using namespace subseg;

namespace {

Labels random_labels(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Labels l(n);
    for (auto& x : l) {
        x = uniform_unit(rng) < 0.15 ? 1 : 0;
    }
    l.back() = 1;
    return l;
}

TokenList random_tokens(std::size_t n, std::size_t vocab, std::uint64_t seed) {
    Rng rng(seed);
    TokenList t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back("w" + std::to_string(uniform_index(rng, vocab)));
    }
    return t;
}

void BM_WindowDiff(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto ref = random_labels(n, 1);
    const auto hyp = random_labels(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(window_diff(ref, hyp));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WindowDiff)->Range(64, 1 << 16);

void BM_DocBleu(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SegmentList hyp{random_tokens(n, 500, 3)};
    const SegmentList ref{random_tokens(n, 500, 4)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(doc_bleu(hyp, ref).bleu);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DocBleu)->Range(64, 1 << 14);

void BM_ClirRetrieve(benchmark::State& state) {
    std::map<std::string, TokenList> docs;
    for (int d = 0; d < state.range(0); ++d) {
        docs["doc" + std::to_string(d)] = random_tokens(300, 2000, static_cast<std::uint64_t>(d));
    }
    const Index index = build_index(docs);
    const TokenList query = random_tokens(3, 2000, 99);
    for (auto _ : state) {
        benchmark::DoNotOptimize(retrieve(index, query).size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClirRetrieve)->Range(16, 4096);

}  // namespace
