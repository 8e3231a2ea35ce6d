#pragma once

#include <filesystem>

#include "mw/cnn/network.hpp"

namespace mw::cnn {

// Versioned binary parameter container: magic bytes, a textual model
// description, then a manifest of named tensors with shapes and
// little-endian float32 payloads.
void save_checkpoint(const std::filesystem::path& path, Network<float>& net);

// Rebuild the network a checkpoint was saved from. Raises DataError on a
// bad signature, version, manifest or payload.
Network<float> load_checkpoint(const std::filesystem::path& path);

}  // namespace mw::cnn
