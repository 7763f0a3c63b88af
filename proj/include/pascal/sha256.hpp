#pragma once

#include <string>

namespace pascal {

// Hex digest; used to fingerprint input files in reports.
std::string sha256_hex(const std::string &data);

} // namespace pascal
