#pragma once

#include <string>
#include <string_view>

namespace drawlab {

/// SHA-1 digest as a lowercase hex string.
std::string sha1_hex(std::string_view data);

/// Hash of a byte string the way `git hash-object` does it for blobs.
std::string git_blob_sha1(std::string_view content);

} // namespace drawlab
