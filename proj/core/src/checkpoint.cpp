#include "mrlmc/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace mrlmc {

using nlohmann::json;

void save_checkpoint(const std::vector<ParamRef>& params, const std::filesystem::path& path) {
    const std::filesystem::path blob_path = path.string() + ".f32";

    json index;
    index["format"] = "mrlmc-checkpoint-v1";
    index["blob"] = blob_path.filename().string();
    index["tensors"] = json::array();

    std::ofstream blob(blob_path, std::ios::binary);
    if (!blob) throw ValidationError("cannot open for writing: " + blob_path.string());
    std::size_t offset = 0;
    for (const auto& p : params) {
        json entry;
        entry["name"] = p.name;
        entry["shape"] = p.tensor.shape();
        entry["offset"] = offset;
        entry["count"] = p.tensor.size();
        index["tensors"].push_back(entry);

        std::vector<float> buf(p.tensor.value().begin(), p.tensor.value().end());
        blob.write(reinterpret_cast<const char*>(buf.data()),
                   static_cast<std::streamsize>(buf.size() * sizeof(float)));
        offset += p.tensor.size();
    }
    if (!blob) throw ValidationError("write failed: " + blob_path.string());

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path.string());
    out << index.dump(2) << "\n";
}

void load_checkpoint(const std::vector<ParamRef>& params, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("missing file: " + path.string());
    json index;
    in >> index;

    const std::filesystem::path blob_path =
        path.parent_path() / index.at("blob").get<std::string>();
    std::ifstream blob(blob_path, std::ios::binary);
    if (!blob) throw ValidationError("missing file: " + blob_path.string());

    std::map<std::string, std::pair<std::size_t, std::vector<std::size_t>>> entries;
    for (const auto& e : index.at("tensors"))
        entries[e.at("name").get<std::string>()] = {
            e.at("offset").get<std::size_t>(),
            e.at("shape").get<std::vector<std::size_t>>()};

    for (const auto& p : params) {
        auto it = entries.find(p.name);
        if (it == entries.end())
            throw ValidationError("checkpoint: missing tensor " + p.name);
        if (it->second.second != p.tensor.shape())
            throw ValidationError("checkpoint: shape mismatch for " + p.name);

        std::vector<float> buf(p.tensor.size());
        blob.seekg(static_cast<std::streamoff>(it->second.first * sizeof(float)));
        blob.read(reinterpret_cast<char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (!blob) throw ValidationError("checkpoint: truncated blob " + blob_path.string());
        auto& value = p.tensor.node()->value;
        for (std::size_t i = 0; i < buf.size(); ++i) value[i] = static_cast<double>(buf[i]);
    }
}

void round_to_f32(const std::vector<ParamRef>& params) {
    for (const auto& p : params)
        for (auto& v : p.tensor.node()->value)
            v = static_cast<double>(static_cast<float>(v));
}

} // namespace mrlmc
