#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace hitchin::report {

using Json = nlohmann::ordered_json;

/// %.17g; non-finite values become "nan" / "inf" / "-inf".
std::string fmt17(double x);

/// JSON text with every floating-point number written to 17 significant digits
/// (non-finite numbers become null). Keys keep insertion order.
std::string dump(const Json& j, int indent = 2);

/// Writes text to a file, throwing std::runtime_error on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hitchin::report
