// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "mrlmc/checkpoint.hpp"
#include "mrlmc/config.hpp"
#include "mrlmc/contrastive.hpp"
#include "mrlmc/gradcheck.hpp"
#include "mrlmc/preprocess.hpp"
#include "mrlmc/semantic.hpp"
#include "mrlmc/synth.hpp"
#include "mrlmc/training.hpp"

using namespace mrlmc;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
    std::printf("criterion %d %-28s %s  (%s)\n", index, name.c_str(), ok ? "PASS" : "FAIL",
                detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

// 1. every finite-difference gradient contract holds at 1e-3
void criterion_gradients() {
    double worst = 0.0;
    for (const auto& r : gradcheck_all(42)) worst = std::max(worst, r.max_rel_err);
    report(1, "gradient checks", worst <= 1e-3, fmt("max rel err %.3e", worst));
}

// 2. contrastive loss equals a brute-force double loop; identical batches
//    cost exactly log(2N - 1)
void criterion_contrastive() {
    Rng rng(7);
    double worst = 0.0;
    for (std::size_t n_pairs : {2u, 3u, 4u}) {
        PairBatch batch;
        batch.temperature = 0.2;
        for (std::size_t i = 0; i < 2 * n_pairs; ++i) {
            std::vector<double> v(10);
            for (auto& x : v) x = rng.gaussian();
            batch.items.push_back(ad::Tensor::leaf({10}, std::move(v)));
        }
        auto sim = [&](std::size_t i, std::size_t j) {
            return cosine_sim_value(batch.items[i].value(), batch.items[j].value());
        };
        double oracle = 0.0;
        const std::size_t n = batch.items.size();
        for (std::size_t i = 0; i < n; ++i) {
            double denom = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom += std::exp(sim(i, j) / batch.temperature);
            oracle += -std::log(std::exp(sim(i, i ^ 1) / batch.temperature) / denom);
        }
        oracle /= static_cast<double>(n);
        worst = std::max(worst, std::abs(l_msc(batch).item() - oracle));
    }

    double ident_err = 0.0;
    for (std::size_t n_pairs : {2u, 3u, 4u}) {
        PairBatch batch;
        batch.temperature = 0.2;
        for (std::size_t i = 0; i < 2 * n_pairs; ++i)
            batch.items.push_back(ad::Tensor::leaf({3}, {0.5, -1.0, 2.0}));
        const double expect = std::log(static_cast<double>(2 * n_pairs - 1));
        ident_err = std::max(ident_err, std::abs(l_msc(batch).item() - expect));
    }

    report(2, "contrastive oracle", worst <= 1e-6 && ident_err <= 1e-9,
           fmt("brute-force gap %.2e", worst) + ", " + fmt("log(2N-1) gap %.2e", ident_err));
}

// 3. closed-form spot values of the loss terms and attention normalization
void criterion_spot_values() {
    FocalConfig focal;
    const double fl = focal_loss_value(0.9, focal);
    const bool fl_ok = std::abs(fl - 2.634e-4) < 1e-7;

    auto z = ad::Tensor::leaf({4}, {0.3, -1.2, 0.8, 2.0});
    auto zn = ad::Tensor::leaf({4}, {-0.3, 1.2, -0.8, -2.0});
    const double sc_same = l_sc(z, z).item();
    const double sc_anti = l_sc(z, zn).item();
    const bool sc_ok = std::abs(sc_same) < 1e-12 && std::abs(sc_anti - 2.0) < 1e-12;

    Rng rng(3);
    std::vector<double> m(16 * 16);
    for (auto& v : m) v = 2.0 * rng.gaussian();
    auto rows = ad::softmax_rows(ad::Tensor::leaf({16, 16}, std::move(m)));
    double row_err = 0.0;
    for (std::size_t r = 0; r < 16; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < 16; ++c) sum += rows.value()[r * 16 + c];
        row_err = std::max(row_err, std::abs(sum - 1.0));
    }

    report(3, "loss spot values", fl_ok && sc_ok && row_err <= 1e-6,
           fmt("focal %.6e", fl) + fmt(", sc(z,-z) %.15f", sc_anti) +
               fmt(", softmax row err %.2e", row_err));
}

// 4. a thousand augmentation draws never break the window invariants
void criterion_augmentation() {
    SynthSpec sspec;
    sspec.n_records = 1;
    Record rec = synth_dataset(sspec)[0];
    const Signal& x = rec.signal(Modality::FNIRS);

    AugmentSpec spec;
    spec.lambda_s = 3.0;
    Rng rng(11);
    bool ok = true;
    std::string why = "1000 draws clean";

    for (int i = 0; i < 1000 && ok; ++i) {
        WindowDraw d = draw_window(rec.task, spec, rng);
        if (!(d.width > 0.0 && d.width <= spec.lambda_s && spec.lambda_s <= rec.task.t_q &&
              d.t0 >= 0.0 && d.t0 + d.width <= rec.task.t_q + 1e-12)) {
            ok = false;
            why = "window bounds violated at draw " + std::to_string(i);
        }
    }

    Rng mask_rng(12);
    for (int i = 0; i < 1000 && ok; ++i) {
        Signal y = time_mask(x, rec.task, spec, mask_rng);
        if (y.channels != x.channels || y.timesteps != x.timesteps || y.fs != x.fs) {
            ok = false;
            why = "mask changed the shape";
            break;
        }
        for (std::size_t c = 0; c < x.channels && ok; ++c) {
            std::size_t first = x.timesteps, last = 0;
            for (std::size_t t = 0; t < x.timesteps; ++t)
                if (y.at(c, t) != x.at(c, t)) {
                    first = std::min(first, t);
                    last = std::max(last, t);
                }
            if (first == x.timesteps) continue;
            for (std::size_t t = 0; t < x.timesteps; ++t) {
                const bool inside = t >= first && t <= last;
                if (!inside && y.at(c, t) != x.at(c, t)) {
                    ok = false;
                    why = "mask touched samples outside its window";
                    break;
                }
            }
        }
    }

    AugmentSpec unit = spec;
    unit.method = AugmentMethod::WARP;
    unit.warp_lo = 1.0;
    unit.warp_hi = 1.0;
    Rng warp_rng(13);
    for (int i = 0; i < 1000 && ok; ++i) {
        Signal y = time_warp(x, rec.task, unit, warp_rng);
        for (std::size_t k = 0; k < x.data.size(); ++k)
            if (std::abs(y.data[k] - x.data[k]) > 1e-6) {
                ok = false;
                why = "unit warp is not the identity";
                break;
            }
    }

    report(4, "augmentation invariants", ok, why);
}

// 5. hemoglobin inversion against its forward model, and the narrow-band
//    filter's measured response on a 150 s record at 100 Hz
void criterion_preprocess() {
    Rng rng(5);
    const std::size_t C = 4, T = 200;
    std::vector<double> hbo(C * T), hbr(C * T), dist(C, 3.0);
    for (auto& v : hbo) v = 10.0 * rng.gaussian();
    for (auto& v : hbr) v = 10.0 * rng.gaussian();
    BeerLambertConstants constants;
    Signal inverted = od_to_hemoglobin(
        hemoglobin_to_od(hbo, hbr, C, T, 10.0, dist, constants));
    double bl_err = 0.0;
    for (std::size_t i = 0; i < hbo.size(); ++i)
        bl_err = std::max(bl_err, std::abs(inverted.data[i] - hbo[i]) /
                                      std::max(std::abs(hbo[i]), 1e-30));

    const double fs = 100.0;
    const std::size_t n = 15000; // 150 s
    FilterSpec band{0.01, 0.08, 8001};
    auto tone = [&](double f_hz) {
        Signal s;
        s.modality = Modality::FNIRS;
        s.channels = 1;
        s.timesteps = n;
        s.fs = fs;
        s.channel_ids = {"c0"};
        s.data.resize(n);
        for (std::size_t t = 0; t < n; ++t)
            s.data[t] = std::sin(2.0 * std::numbers::pi * f_hz * static_cast<double>(t) / fs);
        return s;
    };
    auto central_rms = [&](const Signal& s) {
        double acc = 0.0;
        for (std::size_t t = n / 4; t < 3 * n / 4; ++t) acc += s.data[t] * s.data[t];
        return std::sqrt(acc / static_cast<double>(n / 2));
    };

    Signal in_band = tone(0.04);
    Signal out_band = tone(0.5);
    const double ref_in = central_rms(in_band);
    const double ref_out = central_rms(out_band);
    const double pass_db = 20.0 * std::log10(central_rms(bandpass_fir(in_band, band)) / ref_in);
    const double stop_db = 20.0 * std::log10(central_rms(bandpass_fir(out_band, band)) / ref_out);

    const bool ok = bl_err <= 1e-9 && std::abs(pass_db) <= 1.0 && stop_db <= -40.0;
    report(5, "preprocessing oracles", ok,
           fmt("inversion rel err %.2e", bl_err) + fmt(", 0.04 Hz %+.3f dB", pass_db) +
               fmt(", 0.5 Hz %.1f dB", stop_db));
}

// 6. training on the stock synthetic set reaches macro F1 >= 0.90 across
//    three seeds within five minutes total
void criterion_learnability(const std::vector<Record>& records) {
    const auto start = std::chrono::steady_clock::now();
    double sum_f1 = 0.0;
    for (std::uint64_t seed : {1, 2, 3}) {
        TrainConfig cfg;
        cfg.seed = seed;
        sum_f1 += train(cfg, records).test_metrics.macro_f1;
    }
    const double mean_f1 = sum_f1 / 3.0;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(6, "learnability", mean_f1 >= 0.90 && elapsed <= 300.0,
           fmt("mean macro F1 %.4f", mean_f1) + fmt(" in %.0f s", elapsed));
}

// 7. removing loss terms never helps: mean F1(all) >= mean F1(focal only)
void criterion_ablation(const std::vector<Record>& records) {
    double fl_only = 0.0, all_terms = 0.0;
    std::string table = "mean F1 by row:";
    double row_sums[4] = {0, 0, 0, 0};
    for (std::uint64_t seed : {1, 2, 3}) {
        TrainConfig cfg;
        cfg.seed = seed;
        auto rows = ablate(cfg, records);
        for (std::size_t i = 0; i < rows.size(); ++i) row_sums[i] += rows[i].metrics.macro_f1;
        fl_only += rows[0].metrics.macro_f1;
        all_terms += rows[3].metrics.macro_f1;
    }
    for (double s : row_sums) table += fmt(" %.3f", s / 3.0);
    report(7, "ablation direction", all_terms >= fl_only, table);
}

// 8. identical config and seed give byte-identical metrics and checkpoints
void criterion_determinism(const std::vector<Record>& records) {
    TrainConfig cfg;
    cfg.seed = 4;

    auto run = [&](const fs::path& ckpt) {
        TrainResult res = train(cfg, records);
        save_checkpoint(res.model->params(), ckpt);
        return res.test_metrics.to_json();
    };
    fs::path dir = fs::temp_directory_path() / "mrlmc_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir / "run1");
    fs::create_directories(dir / "run2");
    const std::string m1 = run(dir / "run1" / "checkpoint.json");
    const std::string m2 = run(dir / "run2" / "checkpoint.json");

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)), {});
    };
    const bool metrics_same = m1 == m2;
    const bool index_same =
        slurp(dir / "run1" / "checkpoint.json") == slurp(dir / "run2" / "checkpoint.json");
    const bool blob_same =
        slurp(dir / "run1" / "checkpoint.json.f32") == slurp(dir / "run2" / "checkpoint.json.f32");
    report(8, "determinism", metrics_same && index_same && blob_same,
           std::string("metrics ") + (metrics_same ? "identical" : "differ") + ", checkpoint " +
               (index_same && blob_same ? "identical" : "differs"));
}

// 9. the full architecture grid runs on a 50-record set; impossible head
//    counts are flagged instead of crashing
void criterion_sweep() {
    SynthSpec sspec;
    sspec.n_records = 50;
    auto records = synth_dataset(sspec);

    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.early_stop_patience = 10;
    cfg.model.msc.n_out = 8; // narrow tokens so wide head counts are impossible
    auto rows = sweep(cfg, records, SweepGrid{});

    std::size_t feasible = 0, flagged = 0;
    bool valid = rows.size() == 36;
    for (const auto& r : rows) {
        if (r.feasible) {
            ++feasible;
            if (!(r.metrics.macro_f1 >= 0.0 && r.metrics.macro_f1 <= 1.0 &&
                  std::isfinite(r.metrics.accuracy)))
                valid = false;
        } else {
            ++flagged;
        }
    }
    report(9, "architecture sweep", valid && feasible == 18 && flagged == 18,
           std::to_string(feasible) + " feasible rows, " + std::to_string(flagged) + " flagged");
}

} // namespace

int main() {
    SynthSpec stock; // 200 records, 8 channels per modality, ratio 0.2
    auto records = synth_dataset(stock);

    criterion_gradients();
    criterion_contrastive();
    criterion_spot_values();
    criterion_augmentation();
    criterion_preprocess();
    criterion_learnability(records);
    criterion_ablation(records);
    criterion_determinism(records);
    criterion_sweep();

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
