#include "mrlmc/metrics.hpp"

#include <json.hpp>

namespace mrlmc {

MetricsReport compute_metrics(const std::vector<Label>& predicted,
                              const std::vector<Label>& truth) {
    if (predicted.size() != truth.size())
        throw ValidationError("metrics: prediction/truth size mismatch");
    if (predicted.empty()) throw ValidationError("metrics: empty record set");

    MetricsReport r;
    for (std::size_t i = 0; i < truth.size(); ++i)
        r.confusion[static_cast<int>(truth[i])][static_cast<int>(predicted[i])] += 1;

    const double total = static_cast<double>(truth.size());
    r.accuracy = static_cast<double>(r.confusion[0][0] + r.confusion[1][1]) / total;

    double prec_sum = 0.0, rec_sum = 0.0, f1_sum = 0.0;
    for (int cls = 0; cls < 2; ++cls) {
        const double tp = static_cast<double>(r.confusion[cls][cls]);
        const double fp = static_cast<double>(r.confusion[1 - cls][cls]);
        const double fn = static_cast<double>(r.confusion[cls][1 - cls]);
        const double prec = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
        const double rec = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
        const double f1 = prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
        prec_sum += prec;
        rec_sum += rec;
        f1_sum += f1;
    }
    r.macro_precision = prec_sum / 2.0;
    r.macro_recall = rec_sum / 2.0;
    r.macro_f1 = f1_sum / 2.0;
    return r;
}

std::string MetricsReport::to_json() const {
    nlohmann::json j;
    j["accuracy"] = accuracy;
    j["macro_precision"] = macro_precision;
    j["macro_recall"] = macro_recall;
    j["macro_f1"] = macro_f1;
    j["confusion"] = {{confusion[0][0], confusion[0][1]}, {confusion[1][0], confusion[1][1]}};
    return j.dump(2);
}

} // namespace mrlmc
