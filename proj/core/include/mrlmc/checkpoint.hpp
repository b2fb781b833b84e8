#pragma once

#include <filesystem>
#include <vector>

#include "mrlmc/msc.hpp"

namespace mrlmc {

/// Checkpoint format: `<path>` is a JSON index listing {name, shape, offset,
/// count} per tensor plus the blob filename; `<path>.f32` holds all values as
/// float32 little-endian in index order.
void save_checkpoint(const std::vector<ParamRef>& params, const std::filesystem::path& path);

/// Loads by name into the given live parameter tensors; every name must match
/// and shapes must agree.
void load_checkpoint(const std::vector<ParamRef>& params, const std::filesystem::path& path);

/// Round every parameter through float32. Training applies this before the
/// final test evaluation so in-memory metrics match a later `eval` of the
/// written checkpoint exactly.
void round_to_f32(const std::vector<ParamRef>& params);

} // namespace mrlmc
