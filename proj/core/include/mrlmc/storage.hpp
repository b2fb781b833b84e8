#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mrlmc/signal.hpp"

namespace mrlmc {

/// On-disk dataset layout:
///   <dir>/manifest.json                 ordered list of record entries
///   <dir>/<subject>_<modality>.f32      float32 little-endian, row-major C x T
///   <dir>/<subject>_<modality>.json     sidecar with shape/fs/ids/label/task
///
/// save_record appends to manifest.json (creating it when absent); callers
/// writing concurrently must serialize manifest appends themselves.
void save_record(const Record& record, const std::filesystem::path& dir);

Record load_record(const std::filesystem::path& dir, const std::string& subject_id,
                   const std::vector<Modality>& modalities);

/// Records in manifest order; every type invariant is re-validated on load.
std::vector<Record> load_dataset(const std::filesystem::path& dir);

void save_dataset(const std::vector<Record>& records, const std::filesystem::path& dir);

} // namespace mrlmc
