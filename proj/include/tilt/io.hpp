#pragma once

#include <string>
#include <string_view>

#include "tilt/workspace.hpp"

namespace tilt {

enum class Format { Twf, Json };

// Detects TWF ("TWF v1 ...") or canonical JSON ('{'). Errors are thrown as
// WorkspaceError with a line/cell position.
Workspace parse_workspace(std::string_view text);

// TWF can only carry single-character ids: lowercase/digit for units and
// uppercase for dominoes. Other workspaces throw and must use JSON.
std::string serialize_workspace(const Workspace& w, Format f);
bool twf_representable(const Workspace& w);

Workspace load_workspace(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

}  // namespace tilt
