#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace linkgraph::fmt {

inline constexpr std::string_view kUndefined = "undefined";

// Locale-independent, 12 significant digits, shortest of fixed/scientific.
inline std::string real(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, end);
}

inline std::string real(const std::optional<double> &v) { return v ? real(*v) : std::string(kUndefined); }

inline nlohmann::json json_real(const std::optional<double> &v) {
    if (!v) return std::string(kUndefined);
    // Round-trip through the CSV text form so both outputs carry the same digits.
    const auto text = real(*v);
    double parsed = 0;
    std::from_chars(text.data(), text.data() + text.size(), parsed);
    return parsed;
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

} // namespace linkgraph::fmt
