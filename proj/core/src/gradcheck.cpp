#include "mrlmc/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace mrlmc {

using ad::Tensor;

double finite_diff_max_rel_err(const std::vector<ParamRef>& params,
                               const std::function<double()>& forward,
                               const std::function<void()>& backprop,
                               double step) {
    backprop();
    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (const auto& p : params) analytic.push_back(p.tensor.grad());

    const double base = forward();
    double worst = 0.0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& value = params[k].tensor.node()->value;
        for (std::size_t i = 0; i < value.size(); ++i) {
            const double saved = value[i];
            value[i] = saved + step;
            const double plus = forward();
            value[i] = saved - step;
            const double minus = forward();
            value[i] = saved;
            const double g = analytic[k][i];
            auto rel_err = [g](double fd) {
                return std::abs(fd - g) / std::max({std::abs(fd), std::abs(g), 1e-4});
            };
            // Central difference, with one-sided fallbacks: when the probe
            // straddles a rectifier kink the central slope is not a valid
            // oracle, but the analytic gradient still matches one side.
            const double central = rel_err((plus - minus) / (2.0 * step));
            const double right = rel_err((plus - base) / step);
            const double left = rel_err((base - minus) / step);
            worst = std::max(worst, std::min({central, right, left}));
        }
    }
    return worst;
}

namespace {

struct Check {
    std::vector<ParamRef> params;
    std::function<Tensor()> make_loss;
};

double run_check(const Check& c) {
    auto forward = [&] { return c.make_loss().item(); };
    auto backprop = [&] {
        for (const auto& p : c.params)
            std::fill(p.tensor.node()->grad.begin(), p.tensor.node()->grad.end(), 0.0);
        ad::backward(c.make_loss());
    };
    return finite_diff_max_rel_err(c.params, forward, backprop);
}

Tensor random_leaf(std::vector<std::size_t> shape, Rng& rng, bool requires_grad,
                   double sd = 1.0) {
    std::size_t count = 1;
    for (auto s : shape) count *= s;
    std::vector<double> data(count);
    for (auto& v : data) v = sd * rng.gaussian();
    return Tensor::leaf(std::move(shape), std::move(data), requires_grad);
}

} // namespace

std::vector<GradCheckResult> gradcheck_all(std::uint64_t seed) {
    std::vector<GradCheckResult> results;
    Rng seeder(seed);

    // tiny shared fixture dims
    const std::size_t t_len = 20;
    const double fs = 10.0;

    MSCConfig msc_cfg;
    msc_cfg.d = 6;
    msc_cfg.n_scale = 3;
    msc_cfg.n_out = 8;
    msc_cfg.dropout = 0.0;

    TransformerConfig tr_cfg;
    tr_cfg.n_trans = 1;
    tr_cfg.n_head = 2;
    tr_cfg.dropout = 0.0;

    auto make_signal = [&](Modality m, std::size_t channels, Rng& rng) {
        Signal s;
        s.modality = m;
        s.channels = channels;
        s.timesteps = t_len;
        s.fs = fs;
        s.channel_ids.assign(channels, "c");
        s.data.resize(channels * t_len);
        for (auto& v : s.data) v = rng.gaussian();
        return s;
    };

    auto weighted_sum = [](const Tensor& x, const std::vector<double>& w) {
        return ad::sum(ad::mul(x, Tensor::leaf(x.shape(), w)));
    };

    auto weights_for = [&](std::size_t count, Rng& rng) {
        std::vector<double> w(count);
        for (auto& v : w) v = rng.gaussian();
        return w;
    };

    Rng eval_rng(0); // eval mode never draws from it

    { // adapter + MSC forward, both modalities through the shared trunk
        Rng rng(seeder.next_u64());
        MSCEncoder enc(msc_cfg, {{Modality::FNIRS, 4}, {Modality::EEG, 5}}, rng);
        Signal f = make_signal(Modality::FNIRS, 4, rng);
        Signal e = make_signal(Modality::EEG, 5, rng);
        auto wf = weights_for(msc_cfg.m(), rng);
        auto we = weights_for(msc_cfg.m(), rng);
        Check c;
        enc.collect_params(c.params, "msc");
        c.make_loss = [&, wf, we] {
            Tensor vf = enc.forward(f, false, eval_rng);
            Tensor ve = enc.forward(e, false, eval_rng);
            return ad::add(weighted_sum(vf, wf), weighted_sum(ve, we));
        };
        results.push_back({"adapter_msc", run_check(c)});
    }

    { // multi-head attention projections
        Rng rng(seeder.next_u64());
        const std::size_t s_len = 3, width = 8;
        Tensor tokens = random_leaf({s_len, width}, rng, false);
        Tensor wq = random_leaf({width, width}, rng, true, 0.5);
        Tensor wk = random_leaf({width, width}, rng, true, 0.5);
        Tensor wv = random_leaf({width, width}, rng, true, 0.5);
        Tensor wo = random_leaf({width, width}, rng, true, 0.5);
        auto w = weights_for(s_len * width, rng);
        Check c;
        c.params = {{"wq", wq}, {"wk", wk}, {"wv", wv}, {"wo", wo}};
        c.make_loss = [&, w] {
            return weighted_sum(mh_attention(tokens, tokens, tokens, wq, wk, wv, wo, 2), w);
        };
        results.push_back({"mh_attention", run_check(c)});
    }

    { // transformer unit end to end, including the input
        Rng rng(seeder.next_u64());
        SemanticEncoder enc(tr_cfg, msc_cfg.n_scale, msc_cfg.n_out, rng);
        Tensor v = random_leaf({msc_cfg.m()}, rng, true);
        auto w = weights_for(msc_cfg.m(), rng);
        Check c;
        enc.collect_params(c.params, "semantic");
        c.params.push_back({"input", v});
        c.make_loss = [&, w] { return weighted_sum(enc.forward(v, false, eval_rng), w); };
        results.push_back({"transformer_unit", run_check(c)});
    }

    { // fusion head through the focal loss
        Rng rng(seeder.next_u64());
        FusionHead head(msc_cfg.m(), 0.0, rng);
        Tensor z_f = random_leaf({msc_cfg.m()}, rng, true);
        Tensor z_e = random_leaf({msc_cfg.m()}, rng, true);
        FocalConfig focal;
        Check c;
        head.collect_params(c.params, "head");
        c.params.push_back({"z_f", z_f});
        c.params.push_back({"z_e", z_e});
        c.make_loss = [&] {
            Tensor probs = head.forward(z_f, z_e, false, eval_rng);
            return focal_loss(ad::pick(probs, 1), focal);
        };
        results.push_back({"fusion_head", run_check(c)});
    }

    { // contrastive loss over the embeddings
        Rng rng(seeder.next_u64());
        PairBatch batch;
        batch.temperature = 0.2;
        for (int i = 0; i < 6; ++i) batch.items.push_back(random_leaf({10}, rng, true));
        Check c;
        for (std::size_t i = 0; i < batch.items.size(); ++i)
            c.params.push_back({"item" + std::to_string(i), batch.items[i]});
        c.make_loss = [&] { return l_msc(batch); };
        results.push_back({"l_msc", run_check(c)});
    }

    { // semantic consistency loss
        Rng rng(seeder.next_u64());
        Tensor z_f = random_leaf({12}, rng, true);
        Tensor z_e = random_leaf({12}, rng, true);
        Check c;
        c.params = {{"z_f", z_f}, {"z_e", z_e}};
        c.make_loss = [&] { return l_sc(z_f, z_e); };
        results.push_back({"l_sc", run_check(c)});
    }

    { // focal loss through a softmax
        Rng rng(seeder.next_u64());
        Tensor logits = random_leaf({2}, rng, true);
        FocalConfig focal;
        Check c;
        c.params = {{"logits", logits}};
        c.make_loss = [&] { return focal_loss(ad::pick(ad::softmax_rows(logits), 1), focal); };
        results.push_back({"l_fl", run_check(c)});
    }

    { // composed objective through the full model, batch of 2 pairs
        Rng rng(seeder.next_u64());
        ModelConfig cfg;
        cfg.msc = msc_cfg;
        cfg.transformer = tr_cfg;
        cfg.head_dropout = 0.0;
        Model model(cfg, {{Modality::FNIRS, 4}, {Modality::EEG, 5}}, rng.next_u64());
        std::vector<InputPair> batch(2);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            batch[i].x = make_signal(Modality::FNIRS, 4, rng);
            batch[i].y = make_signal(Modality::EEG, 5, rng);
            batch[i].label = i % 2 == 0 ? Label::CONTROL : Label::DEPRESSED;
        }
        Check c;
        c.params = model.params();
        c.make_loss = [&] {
            return model.batch_loss(batch, 0.2, /*train=*/false, eval_rng).total;
        };
        results.push_back({"total_objective", run_check(c)});
    }

    return results;
}

} // namespace mrlmc
