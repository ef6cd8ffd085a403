#pragma once

#include <string>

namespace wkam {

// SHA-1 digest as lowercase hex; used for content-addressed input hashes in
// run manifests.
std::string sha1_hex(const std::string& bytes);

}  // namespace wkam
