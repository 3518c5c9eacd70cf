#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

namespace expanse::cli {

enum class Format { json, csv, text };

Format format_from_string(const std::string& name);

/// A real as a JSON value: a number, or the string "inf" for +infinity.
nlohmann::json real(double v);

/// 12 significant digits, shortest form, locale independent.
std::string format_real(double v);

/// Bit-stable rendering: keys sorted, reals with 12 significant digits.
/// CSV prints the sequence named by doc["primary"] as "n,gamma,rate" rows.
void write_report(const nlohmann::json& doc, Format format, std::ostream& out);

}  // namespace expanse::cli
