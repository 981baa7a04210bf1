#include <benchmark/benchmark.h>

#include "subseg/random.hpp"
#include "subseg/tagger.hpp"

using namespace subseg;

namespace {

TaggerDims bench_dims(bool syntactic) {
    return TaggerDims{.word_vocab = 5000, .pos_vocab = 20, .dep_vocab = 40, .syntactic = syntactic};
}

EncodedSequence random_sequence(const TaggerDims& d, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    EncodedSequence s;
    for (std::size_t i = 0; i < n; ++i) {
        s.words.push_back(static_cast<int>(uniform_index(rng, static_cast<std::size_t>(d.word_vocab))));
        s.pos.push_back(static_cast<int>(uniform_index(rng, static_cast<std::size_t>(d.pos_vocab))));
        s.dep.push_back(static_cast<int>(uniform_index(rng, static_cast<std::size_t>(d.dep_vocab))));
    }
    return s;
}

void BM_Forward(benchmark::State& state) {
    const auto d = bench_dims(state.range(1) != 0);
    const auto params = init_params(d, 1);
    const auto seq = random_sequence(d, static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward(params, seq).probs.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Forward)->ArgsProduct({{16, 64, 256}, {0, 1}});

void BM_ForwardBackward(benchmark::State& state) {
    const auto d = bench_dims(state.range(1) != 0);
    const auto params = init_params(d, 1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto seq = random_sequence(d, n, 2);
    Labels labels(n, 0);
    for (std::size_t i = 5; i < n; i += 6) {
        labels[i] = 1;
    }
    labels.back() = 1;
    TaggerGradients grads(d);
    for (auto _ : state) {
        grads.clear();
        backward(params, forward(params, seq), labels, grads);
        benchmark::DoNotOptimize(grads.squared_norm());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardBackward)->ArgsProduct({{16, 64, 256}, {0, 1}});

}  // namespace
