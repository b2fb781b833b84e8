#include "mrlmc/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "mrlmc/checkpoint.hpp"

namespace mrlmc {

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw ValidationError("train: learning_rate must be > 0");
    if (batch_size < 2) throw ValidationError("train: batch_size must be >= 2 (contrastive)");
    if (epochs < 1) throw ValidationError("train: epochs must be >= 1");
    if (temperature <= 0.0) throw ValidationError("train: temperature must be > 0");
    if (rms_decay <= 0.0 || rms_decay >= 1.0)
        throw ValidationError("train: rms_decay must be in (0, 1)");
    if (train_fraction <= 0.0 || val_fraction <= 0.0 || test_fraction <= 0.0)
        throw ValidationError("train: split fractions must be positive");
    if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
        throw ValidationError("train: split fractions must sum to 1");
    model.validate();
}

Split split_dataset(const std::vector<Record>& records,
                    double train_fraction, double val_fraction, double test_fraction,
                    std::uint64_t seed) {
    if (train_fraction <= 0.0 || val_fraction <= 0.0 || test_fraction <= 0.0 ||
        std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
        throw ValidationError("split: fractions must be positive and sum to 1");

    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < records.size(); ++i)
        by_class[static_cast<int>(records[i].label)].push_back(i);
    for (int cls = 0; cls < 2; ++cls)
        if (by_class[cls].size() < 3)
            throw ValidationError("split: class " + std::to_string(cls) +
                                  " has fewer than 3 records");

    Split split;
    Rng rng(seed);
    for (int cls = 0; cls < 2; ++cls) {
        auto& idx = by_class[cls];
        shuffle(idx, rng);
        const auto n = idx.size();
        auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
        auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(n)));
        n_train = std::max<std::size_t>(1, std::min(n_train, n - 2));
        n_val = std::max<std::size_t>(1, std::min(n_val, n - n_train - 1));
        for (std::size_t i = 0; i < n; ++i) {
            const Record& r = records[idx[i]];
            if (i < n_train)
                split.train.push_back(r);
            else if (i < n_train + n_val)
                split.val.push_back(r);
            else
                split.test.push_back(r);
        }
    }
    return split;
}

namespace {

std::vector<InputPair> raw_pairs(const std::vector<Record>& records, InputMode mode) {
    std::vector<InputPair> pairs;
    pairs.reserve(records.size());
    for (const auto& rec : records) {
        InputPair p;
        p.label = rec.label;
        p.subject_id = rec.subject_id;
        if (mode == InputMode::MULTI) {
            p.x = rec.signal(Modality::FNIRS);
            p.y = rec.signal(Modality::EEG);
        } else {
            Modality m = mode == InputMode::SINGLE_FNIRS ? Modality::FNIRS : Modality::EEG;
            p.x = rec.signal(m);
            p.y = p.x;
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

std::map<Modality, std::size_t> channel_map(const std::vector<Record>& records, InputMode mode) {
    if (records.empty()) throw ValidationError("train: dataset is empty");
    std::map<Modality, std::size_t> channels;
    const Record& first = records.front();
    if (mode == InputMode::MULTI || mode == InputMode::SINGLE_FNIRS)
        channels[Modality::FNIRS] = first.signal(Modality::FNIRS).channels;
    if (mode == InputMode::MULTI || mode == InputMode::SINGLE_EEG)
        channels[Modality::EEG] = first.signal(Modality::EEG).channels;
    return channels;
}

/// RMSProp with exponential squared-gradient averaging.
class RmsProp {
public:
    RmsProp(const std::vector<ParamRef>& params, double lr, double decay, double eps)
        : lr_(lr), decay_(decay), eps_(eps) {
        for (const auto& p : params) state_.emplace_back(p.tensor.size(), 0.0);
    }

    void step(const std::vector<ParamRef>& params) {
        for (std::size_t k = 0; k < params.size(); ++k) {
            auto& node = *params[k].tensor.node();
            auto& sq = state_[k];
            for (std::size_t i = 0; i < node.value.size(); ++i) {
                const double g = node.grad[i];
                sq[i] = decay_ * sq[i] + (1.0 - decay_) * g * g;
                node.value[i] -= lr_ * g / (std::sqrt(sq[i]) + eps_);
            }
        }
    }

    static void zero_grad(const std::vector<ParamRef>& params) {
        for (const auto& p : params)
            std::fill(p.tensor.node()->grad.begin(), p.tensor.node()->grad.end(), 0.0);
    }

private:
    double lr_, decay_, eps_;
    std::vector<std::vector<double>> state_;
};

std::vector<std::vector<double>> snapshot(const std::vector<ParamRef>& params) {
    std::vector<std::vector<double>> out;
    out.reserve(params.size());
    for (const auto& p : params) out.push_back(p.tensor.value());
    return out;
}

void restore(const std::vector<ParamRef>& params, const std::vector<std::vector<double>>& snap) {
    for (std::size_t i = 0; i < params.size(); ++i)
        params[i].tensor.node()->value = snap[i];
}

} // namespace

MetricsReport evaluate(const Model& model, const std::vector<Record>& records, InputMode mode) {
    if (records.empty()) throw ValidationError("evaluate: empty record set");
    auto pairs = raw_pairs(records, mode);
    std::vector<Label> preds, truth;
    preds.reserve(pairs.size());
    for (const auto& p : pairs) {
        preds.push_back(model.predict(p));
        truth.push_back(p.label);
    }
    return compute_metrics(preds, truth);
}

TrainResult train(const TrainConfig& config, const std::vector<Record>& records) {
    config.validate();
    Split split = split_dataset(records, config.train_fraction, config.val_fraction,
                                config.test_fraction, config.seed);

    auto model = std::make_shared<Model>(config.model, channel_map(records, config.mode),
                                         config.seed);
    auto params = model->params();
    RmsProp optimizer(params, config.learning_rate, config.rms_decay, config.rms_eps);

    Rng shuffle_rng(Rng::derive(config.seed, 0xA11CE));
    double best_f1 = -1.0;
    std::size_t best_epoch = 0;
    auto best = snapshot(params);
    std::vector<EpochTrace> trace;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        AugmentSpec aug = config.augment;
        aug.seed = Rng::derive(config.seed, 0xB00 + epoch);
        auto pairs = build_input_pairs(split.train, config.mode, aug);

        std::vector<std::size_t> order(pairs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        shuffle(order, shuffle_rng);

        Rng dropout_rng(Rng::derive(config.seed, 0xD0 + epoch));
        EpochTrace et;
        et.epoch = static_cast<int>(epoch);
        std::size_t batches = 0;

        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            if (end - start < 2) break; // a single pair has no negatives
            std::vector<InputPair> batch;
            batch.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) batch.push_back(pairs[order[i]]);

            Model::BatchLoss loss;
            try {
                loss = model->batch_loss(batch, config.temperature, /*train=*/true, dropout_rng);
            } catch (const NumericError& e) {
                throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(batches) + ": " + e.what());
            }
            RmsProp::zero_grad(params);
            ad::backward(loss.total);
            optimizer.step(params);

            et.total += loss.total.item();
            et.msc += loss.msc.item();
            et.sc += loss.sc.item();
            et.fl += loss.fl.item();
            ++batches;
        }
        if (batches > 0) {
            et.total /= static_cast<double>(batches);
            et.msc /= static_cast<double>(batches);
            et.sc /= static_cast<double>(batches);
            et.fl /= static_cast<double>(batches);
        }

        et.val_macro_f1 = evaluate(*model, split.val, config.mode).macro_f1;
        trace.push_back(et);

        if (et.val_macro_f1 > best_f1) {
            best_f1 = et.val_macro_f1;
            best_epoch = epoch;
            best = snapshot(params);
        }
        if (epoch - best_epoch >= config.early_stop_patience) break;
    }

    // Test metrics come from the f32-rounded best parameters so a later
    // `eval` of the written checkpoint reproduces them bit-for-bit.
    restore(params, best);
    round_to_f32(params);

    TrainResult result;
    result.model = model;
    result.trace = trace;
    result.test_metrics = evaluate(*model, split.test, config.mode);
    result.test_metrics.trace = trace;
    return result;
}

namespace {

template <typename Row, typename Fn>
void run_cells(std::vector<Row>& rows, unsigned threads, Fn&& run_cell) {
    if (threads <= 1) {
        for (auto& row : rows) run_cell(row);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= rows.size()) return;
                run_cell(rows[i]);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace

std::vector<AblationRow> ablate(const TrainConfig& config, const std::vector<Record>& records,
                                unsigned threads) {
    // Row order: {FL only, MSC+FL, SC+FL, all}
    const std::pair<bool, bool> flags[4] = {{false, false}, {true, false}, {false, true}, {true, true}};
    std::vector<AblationRow> rows;
    for (auto [use_msc, use_sc] : flags) {
        AblationRow row;
        row.use_msc = use_msc;
        row.use_sc = use_sc;
        rows.push_back(row);
    }
    run_cells(rows, threads, [&](AblationRow& row) {
        TrainConfig c = config;
        c.model.weights.lambda1 = row.use_msc ? config.model.weights.lambda1 : 0.0;
        c.model.weights.lambda2 = row.use_sc ? config.model.weights.lambda2 : 0.0;
        row.metrics = train(c, records).test_metrics;
    });
    return rows;
}

std::vector<SweepRow> sweep(const TrainConfig& config, const std::vector<Record>& records,
                            const SweepGrid& grid, unsigned threads) {
    std::vector<SweepRow> rows;
    for (auto ns : grid.n_scale)
        for (auto nt : grid.n_trans)
            for (auto nh : grid.n_head) {
                SweepRow r;
                r.n_scale = ns;
                r.n_trans = nt;
                r.n_head = nh;
                rows.push_back(r);
            }

    auto run_cell = [&](SweepRow& row) {
        TrainConfig c = config;
        c.model.msc.n_scale = row.n_scale;
        c.model.transformer.n_trans = row.n_trans;
        c.model.transformer.n_head = row.n_head;
        if (!c.model.transformer.feasible(c.model.msc.n_scale, c.model.msc.n_out)) {
            row.feasible = false;
            return;
        }
        row.metrics = train(c, records).test_metrics;
    };

    run_cells(rows, threads, run_cell);
    return rows;
}

} // namespace mrlmc
