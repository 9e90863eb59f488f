#pragma once

#include <string_view>

namespace tracerl {

// Minimal stderr logging; --quiet silences info and warnings.
void set_quiet(bool quiet);
bool quiet();
void log_info(std::string_view message);
void log_warning(std::string_view message);

}  // namespace tracerl
