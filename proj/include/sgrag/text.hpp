#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgrag {

// Lowercase (ASCII), trim, and collapse internal whitespace runs to one space.
std::string canonical_label(std::string_view raw);

std::string join(std::span<const std::string> parts, std::string_view separator);

// Shortest decimal form that parses back to the same double.
std::string format_real(double value);

// Fixed-point rendering with `decimals` digits, half away from zero.
std::string format_fixed(double value, int decimals);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace sgrag
