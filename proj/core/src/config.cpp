#include "mrlmc/config.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace mrlmc {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& section) {
    if (!j.is_object())
        throw ValidationError("config: section " + section + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ValidationError("config: unknown key '" + it.key() + "' in section " + section);
}

template <typename T>
void read(const json& j, const char* key, T& dest) {
    if (j.contains(key)) dest = j.at(key).get<T>();
}

SynthSpec synth_from_json(const json& j) {
    check_keys(j, {"n_records", "fnirs_channels", "eeg_channels", "fnirs_fs", "eeg_fs",
                   "duration_s", "question_count", "class_ratio", "activation_gain",
                   "noise_sd", "kernel_peak_s", "eeg_osc_hz", "seed"},
               "data");
    SynthSpec s;
    read(j, "n_records", s.n_records);
    read(j, "fnirs_channels", s.fnirs_channels);
    read(j, "eeg_channels", s.eeg_channels);
    read(j, "fnirs_fs", s.fnirs_fs);
    read(j, "eeg_fs", s.eeg_fs);
    read(j, "duration_s", s.duration_s);
    read(j, "question_count", s.question_count);
    read(j, "class_ratio", s.class_ratio);
    read(j, "noise_sd", s.noise_sd);
    read(j, "kernel_peak_s", s.kernel_peak_s);
    read(j, "eeg_osc_hz", s.eeg_osc_hz);
    read(j, "seed", s.seed);
    if (j.contains("activation_gain")) {
        check_keys(j.at("activation_gain"), {"CONTROL", "DEPRESSED"}, "data.activation_gain");
        s.activation_gain[Label::CONTROL] = j.at("activation_gain").at("CONTROL").get<double>();
        s.activation_gain[Label::DEPRESSED] = j.at("activation_gain").at("DEPRESSED").get<double>();
    }
    return s;
}

json synth_to_json(const SynthSpec& s) {
    return {{"n_records", s.n_records},
            {"fnirs_channels", s.fnirs_channels},
            {"eeg_channels", s.eeg_channels},
            {"fnirs_fs", s.fnirs_fs},
            {"eeg_fs", s.eeg_fs},
            {"duration_s", s.duration_s},
            {"question_count", s.question_count},
            {"class_ratio", s.class_ratio},
            {"activation_gain",
             {{"CONTROL", s.activation_gain.at(Label::CONTROL)},
              {"DEPRESSED", s.activation_gain.at(Label::DEPRESSED)}}},
            {"noise_sd", s.noise_sd},
            {"kernel_peak_s", s.kernel_peak_s},
            {"eeg_osc_hz", s.eeg_osc_hz},
            {"seed", s.seed}};
}

FilterSpec filter_from_json(const json& j, const std::string& section) {
    check_keys(j, {"low_hz", "high_hz", "taps"}, section);
    FilterSpec f;
    read(j, "low_hz", f.low_hz);
    read(j, "high_hz", f.high_hz);
    read(j, "taps", f.taps);
    return f;
}

json filter_to_json(const FilterSpec& f) {
    return {{"low_hz", f.low_hz}, {"high_hz", f.high_hz}, {"taps", f.taps}};
}

PreprocessConfig preprocess_from_json(const json& j) {
    check_keys(j, {"fnirs_band", "eeg_band", "apply_bandpass", "fs_common",
                   "fnirs_channels", "eeg_channels", "beer_lambert"},
               "preprocess");
    PreprocessConfig p;
    if (j.contains("fnirs_band")) p.fnirs_band = filter_from_json(j.at("fnirs_band"), "preprocess.fnirs_band");
    if (j.contains("eeg_band")) p.eeg_band = filter_from_json(j.at("eeg_band"), "preprocess.eeg_band");
    read(j, "apply_bandpass", p.apply_bandpass);
    read(j, "fs_common", p.fs_common);
    read(j, "fnirs_channels", p.fnirs_channels);
    read(j, "eeg_channels", p.eeg_channels);
    if (j.contains("beer_lambert")) {
        const json& b = j.at("beer_lambert");
        check_keys(b, {"extinction_690", "extinction_830", "dpf"}, "preprocess.beer_lambert");
        if (b.contains("extinction_690")) {
            auto v = b.at("extinction_690").get<std::vector<double>>();
            if (v.size() != 2) throw ValidationError("config: extinction_690 needs [HbO, HbR]");
            p.beer_lambert.extinction[0][0] = v[0];
            p.beer_lambert.extinction[0][1] = v[1];
        }
        if (b.contains("extinction_830")) {
            auto v = b.at("extinction_830").get<std::vector<double>>();
            if (v.size() != 2) throw ValidationError("config: extinction_830 needs [HbO, HbR]");
            p.beer_lambert.extinction[1][0] = v[0];
            p.beer_lambert.extinction[1][1] = v[1];
        }
        if (b.contains("dpf")) {
            auto v = b.at("dpf").get<std::vector<double>>();
            if (v.size() != 2) throw ValidationError("config: dpf needs one value per wavelength");
            p.beer_lambert.dpf[0] = v[0];
            p.beer_lambert.dpf[1] = v[1];
        }
    }
    return p;
}

json preprocess_to_json(const PreprocessConfig& p) {
    return {{"fnirs_band", filter_to_json(p.fnirs_band)},
            {"eeg_band", filter_to_json(p.eeg_band)},
            {"apply_bandpass", p.apply_bandpass},
            {"fs_common", p.fs_common},
            {"fnirs_channels", p.fnirs_channels},
            {"eeg_channels", p.eeg_channels},
            {"beer_lambert",
             {{"extinction_690", {p.beer_lambert.extinction[0][0], p.beer_lambert.extinction[0][1]}},
              {"extinction_830", {p.beer_lambert.extinction[1][0], p.beer_lambert.extinction[1][1]}},
              {"dpf", {p.beer_lambert.dpf[0], p.beer_lambert.dpf[1]}}}}};
}

AugmentSpec augment_from_json(const json& j) {
    check_keys(j, {"method", "lambda_s", "warp_factor_range", "probability", "seed"}, "augment");
    AugmentSpec a;
    if (j.contains("method")) {
        const auto m = j.at("method").get<std::string>();
        if (m == "MASK")
            a.method = AugmentMethod::MASK;
        else if (m == "WARP")
            a.method = AugmentMethod::WARP;
        else
            throw ValidationError("config: augment method must be MASK or WARP");
    }
    read(j, "lambda_s", a.lambda_s);
    if (j.contains("warp_factor_range")) {
        auto v = j.at("warp_factor_range").get<std::vector<double>>();
        if (v.size() != 2) throw ValidationError("config: warp_factor_range needs [lo, hi]");
        a.warp_lo = v[0];
        a.warp_hi = v[1];
    }
    read(j, "probability", a.probability);
    read(j, "seed", a.seed);
    return a;
}

json augment_to_json(const AugmentSpec& a) {
    return {{"method", a.method == AugmentMethod::MASK ? "MASK" : "WARP"},
            {"lambda_s", a.lambda_s},
            {"warp_factor_range", {a.warp_lo, a.warp_hi}},
            {"probability", a.probability},
            {"seed", a.seed}};
}

MSCConfig msc_from_json(const json& j) {
    check_keys(j, {"d", "n_scale", "n_out", "alpha", "dropout", "kernel"}, "model");
    MSCConfig m;
    read(j, "d", m.d);
    read(j, "n_scale", m.n_scale);
    read(j, "n_out", m.n_out);
    read(j, "alpha", m.alpha);
    read(j, "dropout", m.dropout);
    read(j, "kernel", m.kernel);
    return m;
}

json msc_to_json(const MSCConfig& m) {
    return {{"d", m.d},       {"n_scale", m.n_scale}, {"n_out", m.n_out},
            {"alpha", m.alpha}, {"dropout", m.dropout}, {"kernel", m.kernel}};
}

TransformerConfig transformer_from_json(const json& j) {
    check_keys(j, {"n_trans", "n_head", "mlp_hidden", "dropout", "shared_across_modalities"},
               "semantic");
    TransformerConfig t;
    read(j, "n_trans", t.n_trans);
    read(j, "n_head", t.n_head);
    read(j, "mlp_hidden", t.mlp_hidden);
    read(j, "dropout", t.dropout);
    read(j, "shared_across_modalities", t.shared_across_modalities);
    return t;
}

json transformer_to_json(const TransformerConfig& t) {
    return {{"n_trans", t.n_trans},
            {"n_head", t.n_head},
            {"mlp_hidden", t.mlp_hidden},
            {"dropout", t.dropout},
            {"shared_across_modalities", t.shared_across_modalities}};
}

} // namespace

void PreprocessConfig::validate() const {
    if (fs_common <= 0.0) throw ValidationError("preprocess: fs_common must be > 0");
    beer_lambert.validate();
}

void ExperimentConfig::validate() const {
    data.validate();
    preprocess.validate();
    train.validate();
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(j, {"data", "preprocess", "augment", "model", "semantic", "head", "train"}, "root");

    ExperimentConfig c;
    if (j.contains("data")) c.data = synth_from_json(j.at("data"));
    if (j.contains("preprocess")) c.preprocess = preprocess_from_json(j.at("preprocess"));
    if (j.contains("augment")) c.train.augment = augment_from_json(j.at("augment"));
    if (j.contains("model")) c.train.model.msc = msc_from_json(j.at("model"));
    if (j.contains("semantic")) c.train.model.transformer = transformer_from_json(j.at("semantic"));

    if (j.contains("head")) {
        const json& h = j.at("head");
        check_keys(h, {"focal_alpha", "focal_gamma", "lambda1", "lambda2", "dropout"}, "head");
        read(h, "focal_alpha", c.train.model.focal.alpha_f);
        read(h, "focal_gamma", c.train.model.focal.gamma);
        read(h, "lambda1", c.train.model.weights.lambda1);
        read(h, "lambda2", c.train.model.weights.lambda2);
        read(h, "dropout", c.train.model.head_dropout);
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        check_keys(t, {"learning_rate", "batch_size", "epochs", "early_stop_patience",
                       "rms_decay", "rms_eps", "temperature", "seed", "train_fraction",
                       "val_fraction", "test_fraction", "mode"},
                   "train");
        read(t, "learning_rate", c.train.learning_rate);
        read(t, "batch_size", c.train.batch_size);
        read(t, "epochs", c.train.epochs);
        read(t, "early_stop_patience", c.train.early_stop_patience);
        read(t, "rms_decay", c.train.rms_decay);
        read(t, "rms_eps", c.train.rms_eps);
        read(t, "temperature", c.train.temperature);
        read(t, "seed", c.train.seed);
        read(t, "train_fraction", c.train.train_fraction);
        read(t, "val_fraction", c.train.val_fraction);
        read(t, "test_fraction", c.train.test_fraction);
        if (t.contains("mode")) c.train.mode = input_mode_from_string(t.at("mode").get<std::string>());
    }
    return c;
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["data"] = synth_to_json(data);
    j["preprocess"] = preprocess_to_json(preprocess);
    j["augment"] = augment_to_json(train.augment);
    j["model"] = msc_to_json(train.model.msc);
    j["semantic"] = transformer_to_json(train.model.transformer);
    j["head"] = {{"focal_alpha", train.model.focal.alpha_f},
                 {"focal_gamma", train.model.focal.gamma},
                 {"lambda1", train.model.weights.lambda1},
                 {"lambda2", train.model.weights.lambda2},
                 {"dropout", train.model.head_dropout}};
    j["train"] = {{"learning_rate", train.learning_rate},
                  {"batch_size", train.batch_size},
                  {"epochs", train.epochs},
                  {"early_stop_patience", train.early_stop_patience},
                  {"rms_decay", train.rms_decay},
                  {"rms_eps", train.rms_eps},
                  {"temperature", train.temperature},
                  {"seed", train.seed},
                  {"train_fraction", train.train_fraction},
                  {"val_fraction", train.val_fraction},
                  {"test_fraction", train.test_fraction},
                  {"mode", to_string(train.mode)}};
    return j.dump(2);
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("missing file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_experiment_config(text);
}

SynthSpec parse_synth_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("synth spec: invalid JSON: ") + e.what());
    }
    return synth_from_json(j);
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("missing file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_synth_spec(text);
}

std::string synth_spec_to_json(const SynthSpec& spec) { return synth_to_json(spec).dump(2); }

} // namespace mrlmc
