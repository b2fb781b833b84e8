#include "mrlmc/storage.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

namespace mrlmc {

namespace {

static_assert(std::endian::native == std::endian::little,
              "dataset format is little-endian; big-endian hosts unsupported");

using nlohmann::json;

json task_to_json(const TaskMeta& t) {
    return {{"total_duration", t.total_duration},
            {"question_count", t.question_count},
            {"t_q", t.t_q}};
}

TaskMeta task_from_json(const json& j) {
    TaskMeta t;
    t.total_duration = j.at("total_duration").get<double>();
    t.question_count = j.at("question_count").get<int>();
    t.t_q = j.at("t_q").get<double>();
    return t;
}

void write_f32(const std::filesystem::path& path, const std::vector<double>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + path.string());
    std::vector<float> buf(data.begin(), data.end());
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out) throw ValidationError("write failed: " + path.string());
}

std::vector<double> read_f32(const std::filesystem::path& path, std::size_t expected) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw ValidationError("missing file: " + path.string());
    auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes != expected * sizeof(float))
        throw ValidationError("shape mismatch: " + path.string() + " holds " +
                              std::to_string(bytes / sizeof(float)) + " floats, sidecar says " +
                              std::to_string(expected));
    in.seekg(0);
    std::vector<float> buf(expected);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw ValidationError("read failed: " + path.string());
    return {buf.begin(), buf.end()};
}

json load_manifest(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) return json{{"records", json::array()}};
    json j;
    in >> j;
    return j;
}

void store_manifest(const std::filesystem::path& dir, const json& j) {
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << "\n";
}

std::string base_name(const std::string& subject, Modality m) {
    return subject + "_" + to_string(m);
}

} // namespace

void save_record(const Record& record, const std::filesystem::path& dir) {
    record.validate();
    std::filesystem::create_directories(dir);

    json entry;
    entry["subject_id"] = record.subject_id;
    entry["label"] = static_cast<int>(record.label);
    entry["task"] = task_to_json(record.task);
    entry["modalities"] = json::array();

    for (const auto& [m, s] : record.signals) {
        std::string base = base_name(record.subject_id, m);
        write_f32(dir / (base + ".f32"), s.data);

        json sidecar;
        sidecar["modality"] = to_string(m);
        sidecar["shape"] = {s.channels, s.timesteps};
        sidecar["fs"] = s.fs;
        sidecar["channel_ids"] = s.channel_ids;
        sidecar["label"] = static_cast<int>(record.label);
        sidecar["subject_id"] = record.subject_id;
        sidecar["task"] = task_to_json(record.task);
        std::ofstream out(dir / (base + ".json"));
        out << sidecar.dump(2) << "\n";
        entry["modalities"].push_back(to_string(m));
    }

    json manifest = load_manifest(dir);
    manifest["records"].push_back(entry);
    store_manifest(dir, manifest);
}

Record load_record(const std::filesystem::path& dir, const std::string& subject_id,
                   const std::vector<Modality>& modalities) {
    Record rec;
    rec.subject_id = subject_id;
    bool have_meta = false;
    for (Modality m : modalities) {
        std::string base = base_name(subject_id, m);
        std::ifstream in(dir / (base + ".json"));
        if (!in) throw ValidationError("missing file: " + (dir / (base + ".json")).string());
        json sidecar;
        in >> sidecar;

        Signal s;
        s.modality = modality_from_string(sidecar.at("modality").get<std::string>());
        auto shape = sidecar.at("shape").get<std::vector<std::size_t>>();
        if (shape.size() != 2) throw ValidationError("sidecar shape must have 2 entries: " + base);
        s.channels = shape[0];
        s.timesteps = shape[1];
        s.fs = sidecar.at("fs").get<double>();
        s.channel_ids = sidecar.at("channel_ids").get<std::vector<std::string>>();
        s.data = read_f32(dir / (base + ".f32"), s.channels * s.timesteps);

        if (!have_meta) {
            rec.label = static_cast<Label>(sidecar.at("label").get<int>());
            rec.task = task_from_json(sidecar.at("task"));
            have_meta = true;
        }
        rec.signals.emplace(m, std::move(s));
    }
    rec.validate();
    return rec;
}

std::vector<Record> load_dataset(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw ValidationError("missing file: " + (dir / "manifest.json").string());
    json manifest;
    in >> manifest;

    std::vector<Record> records;
    for (const auto& entry : manifest.at("records")) {
        std::vector<Modality> mods;
        for (const auto& m : entry.at("modalities"))
            mods.push_back(modality_from_string(m.get<std::string>()));
        records.push_back(load_record(dir, entry.at("subject_id").get<std::string>(), mods));
    }
    return records;
}

void save_dataset(const std::vector<Record>& records, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    store_manifest(dir, json{{"records", json::array()}});
    for (const auto& r : records) save_record(r, dir);
}

} // namespace mrlmc
