// Command-line front end for the MRLMC toolkit: data synthesis,
// preprocessing, training, evaluation, ablation, parameter sweeps, gradient
// self-checks, and embedding export.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mrlmc/checkpoint.hpp"
#include "mrlmc/config.hpp"
#include "mrlmc/gradcheck.hpp"
#include "mrlmc/storage.hpp"

namespace {

using namespace mrlmc;

unsigned env_threads() {
    const char* v = std::getenv("MRLMC_THREADS");
    if (!v) return 1;
    int n = std::atoi(v);
    return n > 0 ? static_cast<unsigned>(n) : 1;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path.string());
    out << text;
}

std::map<Modality, std::size_t> channels_for_mode(const std::vector<Record>& records,
                                                  InputMode mode) {
    if (records.empty()) throw ValidationError("dataset is empty");
    std::map<Modality, std::size_t> channels;
    if (mode != InputMode::SINGLE_EEG)
        channels[Modality::FNIRS] = records.front().signal(Modality::FNIRS).channels;
    if (mode != InputMode::SINGLE_FNIRS)
        channels[Modality::EEG] = records.front().signal(Modality::EEG).channels;
    return channels;
}

std::string trace_csv(const std::vector<EpochTrace>& trace) {
    std::string csv = "epoch,total,msc,sc,fl,val_macro_f1\n";
    for (const auto& t : trace) {
        char line[160];
        std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.9g,%.9g,%.9g\n", t.epoch, t.total,
                      t.msc, t.sc, t.fl, t.val_macro_f1);
        csv += line;
    }
    return csv;
}

std::string metrics_csv_fields(const MetricsReport& m) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f", m.accuracy, m.macro_precision,
                  m.macro_recall, m.macro_f1);
    return buf;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
    SynthSpec spec = load_synth_spec(spec_path);
    auto records = synth_dataset(spec);
    save_dataset(records, out_dir);
    std::cout << "wrote " << records.size() << " records to " << out_dir << "\n";
    return 0;
}

Signal preprocess_signal(const Signal& s, const PreprocessConfig& cfg) {
    Signal out = s;
    if (cfg.apply_bandpass) {
        const FilterSpec& band = s.modality == Modality::FNIRS ? cfg.fnirs_band : cfg.eeg_band;
        out = bandpass_fir(out, band);
    }
    out = resample(out, cfg.fs_common);
    const auto& keep = s.modality == Modality::FNIRS ? cfg.fnirs_channels : cfg.eeg_channels;
    if (!keep.empty()) out = select_channels(out, keep);
    return out;
}

int cmd_preprocess(const std::string& in_dir, const std::string& out_dir,
                   const std::string& cfg_path) {
    ExperimentConfig cfg = load_experiment_config(cfg_path);
    cfg.preprocess.validate();
    auto records = load_dataset(in_dir);
    for (auto& rec : records)
        for (auto& [m, s] : rec.signals) s = preprocess_signal(s, cfg.preprocess);
    save_dataset(records, out_dir);
    std::cout << "preprocessed " << records.size() << " records to " << out_dir << "\n";
    return 0;
}

int cmd_train(const std::string& data_dir, const std::string& cfg_path,
              const std::string& run_dir) {
    ExperimentConfig cfg = load_experiment_config(cfg_path);
    auto records = load_dataset(data_dir);
    TrainResult result = train(cfg.train, records);

    std::filesystem::create_directories(run_dir);
    const std::filesystem::path run(run_dir);
    write_text(run / "config.json", cfg.to_json() + "\n");
    write_text(run / "metrics.json", result.test_metrics.to_json() + "\n");
    write_text(run / "trace.csv", trace_csv(result.trace));
    save_checkpoint(result.model->params(), run / "checkpoint.json");
    std::cout << "test metrics: " << metrics_csv_fields(result.test_metrics)
              << " (acc,prec,rec,f1)\n";
    return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& data_dir,
             const std::string& cfg_path, bool whole_set) {
    ExperimentConfig cfg = load_experiment_config(cfg_path);
    auto records = load_dataset(data_dir);

    Model model(cfg.train.model, channels_for_mode(records, cfg.train.mode), cfg.train.seed);
    load_checkpoint(model.params(), checkpoint);

    MetricsReport metrics;
    if (whole_set) {
        metrics = evaluate(model, records, cfg.train.mode);
    } else {
        Split split = split_dataset(records, cfg.train.train_fraction, cfg.train.val_fraction,
                                    cfg.train.test_fraction, cfg.train.seed);
        metrics = evaluate(model, split.test, cfg.train.mode);
    }
    std::cout << metrics.to_json() << "\n";
    return 0;
}

int cmd_ablate(const std::string& data_dir, const std::string& cfg_path,
               const std::string& out_csv) {
    ExperimentConfig cfg = load_experiment_config(cfg_path);
    auto records = load_dataset(data_dir);
    auto rows = ablate(cfg.train, records, env_threads());

    std::string csv = "l_msc,l_sc,l_fl,accuracy,precision,recall,f1\n";
    for (const auto& r : rows)
        csv += std::string(r.use_msc ? "1" : "0") + "," + (r.use_sc ? "1" : "0") + ",1," +
               metrics_csv_fields(r.metrics) + "\n";
    write_text(out_csv, csv);
    std::cout << csv;
    return 0;
}

int cmd_sweep(const std::string& data_dir, const std::string& cfg_path,
              const std::string& out_csv) {
    ExperimentConfig cfg = load_experiment_config(cfg_path);
    auto records = load_dataset(data_dir);
    auto rows = sweep(cfg.train, records, SweepGrid{}, env_threads());

    std::string csv = "n_scale,n_trans,n_head,status,accuracy,precision,recall,f1\n";
    for (const auto& r : rows) {
        csv += std::to_string(r.n_scale) + "," + std::to_string(r.n_trans) + "," +
               std::to_string(r.n_head) + ",";
        if (r.feasible)
            csv += "ok," + metrics_csv_fields(r.metrics) + "\n";
        else
            csv += "invalid config,,,,\n";
    }
    write_text(out_csv, csv);
    std::cout << csv;
    return 0;
}

int cmd_gradcheck(const std::string& cfg_path) {
    std::uint64_t seed = 42;
    if (!cfg_path.empty()) seed = load_experiment_config(cfg_path).train.seed + 42;
    auto results = gradcheck_all(seed);
    bool ok = true;
    for (const auto& r : results) {
        std::printf("%-18s max_rel_err %.3e %s\n", r.name.c_str(), r.max_rel_err,
                    r.max_rel_err <= 1e-3 ? "ok" : "FAIL");
        ok = ok && r.max_rel_err <= 1e-3;
    }
    if (!ok) throw NumericError("gradient check failed");
    return 0;
}

int cmd_embed(const std::string& checkpoint, const std::string& data_dir,
              const std::string& cfg_path, const std::string& out_csv) {
    ExperimentConfig cfg = load_experiment_config(cfg_path);
    auto records = load_dataset(data_dir);

    Model model(cfg.train.model, channels_for_mode(records, cfg.train.mode), cfg.train.seed);
    load_checkpoint(model.params(), checkpoint);

    AugmentSpec no_aug = cfg.train.augment;
    no_aug.probability = 0.0;
    std::string csv = "subject_id,label,vector,dims...\n";
    Rng rng(0);
    for (const auto& rec : records) {
        std::vector<Record> one{rec};
        auto pairs = build_input_pairs(one, cfg.train.mode, no_aug);
        PairForward f = model.forward_pair(pairs.front(), /*train=*/false, rng);
        auto emit = [&](const char* name, const ad::Tensor& t) {
            csv += rec.subject_id + "," + std::to_string(static_cast<int>(rec.label)) + "," + name;
            for (double v : t.value()) {
                char b[32];
                std::snprintf(b, sizeof(b), ",%.9g", v);
                csv += b;
            }
            csv += "\n";
        };
        emit("v", f.v);
        emit("u", f.u);
        emit("z_f", f.z_f);
        emit("z_e", f.z_e);
    }
    write_text(out_csv, csv);
    std::cout << "wrote embeddings for " << records.size() << " records to " << out_csv << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MRLMC multimodal physiological-signal representation learning toolkit"};
    app.require_subcommand(1);

    std::string spec_path, cfg_path, in_dir, out_path, data_dir, checkpoint;
    bool whole_set = false;

    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--spec", spec_path, "synth spec JSON")->required();
    synth->add_option("--out", out_path, "output dataset directory")->required();

    auto* preprocess = app.add_subcommand("preprocess", "band-pass, resample, select channels");
    preprocess->add_option("--in", in_dir, "input dataset directory")->required();
    preprocess->add_option("--out", out_path, "output dataset directory")->required();
    preprocess->add_option("--config", cfg_path, "experiment config JSON")->required();

    auto* train_cmd = app.add_subcommand("train", "train and evaluate on the test split");
    train_cmd->add_option("--data", data_dir, "dataset directory")->required();
    train_cmd->add_option("--config", cfg_path, "experiment config JSON")->required();
    train_cmd->add_option("--out", out_path, "run directory")->required();

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
    eval_cmd->add_option("--checkpoint", checkpoint, "checkpoint index JSON")->required();
    eval_cmd->add_option("--data", data_dir, "dataset directory")->required();
    eval_cmd->add_option("--config", cfg_path, "experiment config JSON")->required();
    eval_cmd->add_flag("--all", whole_set, "evaluate on all records instead of the test split");

    auto* ablate_cmd = app.add_subcommand("ablate", "loss-term ablation table");
    ablate_cmd->add_option("--data", data_dir, "dataset directory")->required();
    ablate_cmd->add_option("--config", cfg_path, "experiment config JSON")->required();
    ablate_cmd->add_option("--out", out_path, "output CSV")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "parameter grid sweep");
    sweep_cmd->add_option("--data", data_dir, "dataset directory")->required();
    sweep_cmd->add_option("--config", cfg_path, "experiment config JSON")->required();
    sweep_cmd->add_option("--out", out_path, "output CSV")->required();

    auto* gradcheck_cmd = app.add_subcommand("gradcheck", "finite-difference gradient contracts");
    gradcheck_cmd->add_option("--config", cfg_path, "experiment config JSON");

    auto* embed = app.add_subcommand("embed", "export v, u, z_f, z_e per record");
    embed->add_option("--checkpoint", checkpoint, "checkpoint index JSON")->required();
    embed->add_option("--data", data_dir, "dataset directory")->required();
    embed->add_option("--config", cfg_path, "experiment config JSON")->required();
    embed->add_option("--out", out_path, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(spec_path, out_path);
        if (preprocess->parsed()) return cmd_preprocess(in_dir, out_path, cfg_path);
        if (train_cmd->parsed()) return cmd_train(data_dir, cfg_path, out_path);
        if (eval_cmd->parsed()) return cmd_eval(checkpoint, data_dir, cfg_path, whole_set);
        if (ablate_cmd->parsed()) return cmd_ablate(data_dir, cfg_path, out_path);
        if (sweep_cmd->parsed()) return cmd_sweep(data_dir, cfg_path, out_path);
        if (gradcheck_cmd->parsed()) return cmd_gradcheck(cfg_path);
        if (embed->parsed()) return cmd_embed(checkpoint, data_dir, cfg_path, out_path);
    } catch (const mrlmc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const mrlmc::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
