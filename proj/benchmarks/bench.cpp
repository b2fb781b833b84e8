#include <benchmark/benchmark.h>

#include <map>
#include <vector>

#include "mrlmc/contrastive.hpp"
#include "mrlmc/model.hpp"
#include "mrlmc/preprocess.hpp"
#include "mrlmc/semantic.hpp"
#include "mrlmc/synth.hpp"

using namespace mrlmc;

namespace {

Signal random_signal(Modality m, std::size_t channels, std::size_t timesteps,
                     std::uint64_t seed) {
    Signal s;
    s.modality = m;
    s.channels = channels;
    s.timesteps = timesteps;
    s.fs = 10.0;
    for (std::size_t c = 0; c < channels; ++c) s.channel_ids.push_back("c" + std::to_string(c));
    Rng rng(seed);
    s.data.resize(channels * timesteps);
    for (auto& v : s.data) v = rng.gaussian();
    return s;
}

const std::map<Modality, std::size_t> kChannels = {{Modality::FNIRS, 8}, {Modality::EEG, 8}};

} // namespace

static void BM_EncoderForward(benchmark::State& state) {
    MSCConfig cfg;
    Rng init(1);
    MSCEncoder enc(cfg, kChannels, init);
    Signal x = random_signal(Modality::FNIRS, 8, 100, 2);
    Rng rng(0);
    for (auto _ : state) benchmark::DoNotOptimize(enc.forward(x, false, rng).value());
}
BENCHMARK(BM_EncoderForward);

static void BM_Attention(benchmark::State& state) {
    const std::size_t S = 5, W = 32;
    Rng rng(3);
    auto mat = [&](std::size_t r, std::size_t c) {
        std::vector<double> v(r * c);
        for (auto& x : v) x = 0.3 * rng.gaussian();
        return ad::Tensor::leaf({r, c}, std::move(v));
    };
    auto x = mat(S, W), wq = mat(W, W), wk = mat(W, W), wv = mat(W, W), wo = mat(W, W);
    for (auto _ : state)
        benchmark::DoNotOptimize(mh_attention(x, x, x, wq, wk, wv, wo, 16).value());
}
BENCHMARK(BM_Attention);

static void BM_ContrastiveLoss(benchmark::State& state) {
    const auto n_pairs = static_cast<std::size_t>(state.range(0));
    PairBatch batch;
    batch.temperature = 0.2;
    Rng rng(5);
    for (std::size_t i = 0; i < 2 * n_pairs; ++i) {
        std::vector<double> v(160);
        for (auto& x : v) x = rng.gaussian();
        batch.items.push_back(ad::Tensor::leaf({160}, std::move(v)));
    }
    for (auto _ : state) benchmark::DoNotOptimize(l_msc(batch).item());
}
BENCHMARK(BM_ContrastiveLoss)->Arg(8)->Arg(16)->Arg(32);

static void BM_TrainStep(benchmark::State& state) {
    SynthSpec sspec;
    sspec.n_records = 16;
    auto records = synth_dataset(sspec);
    AugmentSpec aug;
    auto pairs = build_input_pairs(records, InputMode::MULTI, aug);

    ModelConfig cfg;
    Model model(cfg, kChannels, 1);
    Rng rng(0);
    for (auto _ : state) {
        auto loss = model.batch_loss(pairs, 0.2, true, rng);
        ad::backward(loss.total);
        benchmark::DoNotOptimize(loss.total.item());
    }
}
BENCHMARK(BM_TrainStep);

static void BM_BandPass(benchmark::State& state) {
    FilterSpec band{0.01, 0.08, static_cast<std::size_t>(state.range(0))};
    Signal x = random_signal(Modality::FNIRS, 8, 15000, 7);
    x.fs = 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(bandpass_fir(x, band).data);
}
BENCHMARK(BM_BandPass)->Arg(1001)->Arg(8001)->Unit(benchmark::kMillisecond);

static void BM_Resample(benchmark::State& state) {
    Signal x = random_signal(Modality::EEG, 8, 10000, 9);
    x.fs = 1000.0;
    for (auto _ : state) benchmark::DoNotOptimize(resample(x, 100.0).data);
}
BENCHMARK(BM_Resample);

BENCHMARK_MAIN();
