#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "elicit/formal_context.hpp"

namespace elicit {

// Burmeister format: "B", blank line, object count, attribute count, blank
// line, object names, attribute names, then one "X"/"." row per object.
std::string context_to_cxt(const FormalContext& context);
FormalContext context_from_cxt(std::string_view text);

void export_cxt(const FormalContext& context, const std::filesystem::path& path);
FormalContext load_cxt(const std::filesystem::path& path);

}  // namespace elicit
