#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mrlmc/storage.hpp"
#include "mrlmc/synth.hpp"

using namespace mrlmc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* tag) {
    fs::path dir = fs::temp_directory_path() / (std::string("mrlmc_storage_") + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<Record> small_dataset(std::size_t n, std::uint64_t seed) {
    SynthSpec spec;
    spec.n_records = n;
    spec.seed = seed;
    return synth_dataset(spec);
}

} // namespace

TEST_CASE("save then load round-trips through float32") {
    auto dir = fresh_dir("roundtrip");
    auto records = small_dataset(4, 3);
    save_dataset(records, dir);

    auto loaded = load_dataset(dir);
    REQUIRE(loaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(loaded[i].subject_id == records[i].subject_id);
        CHECK(loaded[i].label == records[i].label);
        CHECK(loaded[i].task.t_q == doctest::Approx(records[i].task.t_q));
        for (auto m : {Modality::FNIRS, Modality::EEG}) {
            const auto& a = records[i].signal(m);
            const auto& b = loaded[i].signal(m);
            CHECK(b.channels == a.channels);
            CHECK(b.timesteps == a.timesteps);
            CHECK(b.fs == a.fs);
            CHECK(b.channel_ids == a.channel_ids);
            for (std::size_t k = 0; k < a.data.size(); ++k)
                CHECK(b.data[k] == static_cast<double>(static_cast<float>(a.data[k])));
        }
    }
}

TEST_CASE("a second save produces byte-identical files") {
    auto records = small_dataset(3, 11);
    auto d1 = fresh_dir("bytes1");
    auto d2 = fresh_dir("bytes2");
    save_dataset(records, d1);
    save_dataset(records, d2);

    for (const auto& entry : fs::directory_iterator(d1)) {
        std::ifstream a(entry.path(), std::ios::binary);
        std::ifstream b(d2 / entry.path().filename(), std::ios::binary);
        REQUIRE(b.good());
        std::string sa((std::istreambuf_iterator<char>(a)), {});
        std::string sb((std::istreambuf_iterator<char>(b)), {});
        CHECK(sa == sb);
    }
}

TEST_CASE("manifest preserves record order") {
    auto dir = fresh_dir("order");
    auto records = small_dataset(5, 21);
    save_dataset(records, dir);
    auto loaded = load_dataset(dir);
    for (std::size_t i = 0; i < records.size(); ++i)
        CHECK(loaded[i].subject_id == records[i].subject_id);
}

TEST_CASE("truncated blob is rejected as a shape mismatch") {
    auto dir = fresh_dir("truncated");
    auto records = small_dataset(1, 5);
    save_dataset(records, dir);

    fs::path blob = dir / (records[0].subject_id + "_FNIRS.f32");
    REQUIRE(fs::exists(blob));
    fs::resize_file(blob, fs::file_size(blob) - 8);

    bool threw = false;
    try {
        load_dataset(dir);
    } catch (const ValidationError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("shape mismatch") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("missing manifest is a validation error") {
    auto dir = fresh_dir("empty");
    CHECK_THROWS_AS(load_dataset(dir), ValidationError);
}
