#pragma once

#include <cstdint>
#include <string>

#include "gmoe/model.hpp"

namespace liftrisk {

// JSON on disk, format_version 1. Weights are stored as flat
// column-major arrays; a FNV-1a hash over their raw bytes guards
// against silent truncation or editing.
void save_model(const GmoeModel& model, const std::string& path);

// Throws std::runtime_error on unreadable files, shape mismatches
// (naming the offending array), checksum mismatch, or an unsupported
// format_version.
GmoeModel load_model(const std::string& path);

// FNV-1a 64-bit over `count` doubles, little-endian byte order.
std::uint64_t fnv1a64(const double* values, std::size_t count);

}  // namespace liftrisk
