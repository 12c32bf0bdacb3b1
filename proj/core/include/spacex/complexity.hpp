#pragma once

#include <string>
#include <vector>

namespace spacex::complexity {

/// One entry per detected method/function: 1 + branch-token count within
/// its body. Brace segmentation for C-like languages, def/indent
/// segmentation for Python. Unsupported or binary input yields an empty
/// list.
std::vector<int> estimate_complexity(const std::string& source_text,
                                     const std::string& language_hint = {});

/// Maps a file extension or language name to the internal language key
/// ("clike", "python", or "" when unsupported).
std::string language_for_hint(const std::string& hint);

/// Language key from a repository path's extension.
std::string language_for_path(const std::string& path);

}  // namespace spacex::complexity
