// Content hashing for run manifests: the same blob digest git assigns, so
// published stage files can be checked against a manifest with git tooling.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace bscan {

// SHA-1 of "blob <size>\0<content>", lowercase hex (40 chars); equals
// `git hash-object` on the same bytes.
std::string git_blob_sha1(std::string_view content);

// Same digest over a file's bytes. Throws std::runtime_error when unreadable.
std::string git_blob_sha1_file(const std::filesystem::path& path);

}  // namespace bscan
