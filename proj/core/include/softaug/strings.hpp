#pragma once

#include <string>
#include <vector>

namespace softaug {

// ASCII-only lowercasing; bytes outside A-Z pass through untouched.
std::string lower_ascii(std::string s);

// Strips ASCII whitespace from both ends.
std::string trim(const std::string& s);

// Splits on a single-character delimiter; keeps empty fields.
std::vector<std::string> split(const std::string& s, char delim);

std::string join(const std::vector<std::string>& tokens, const std::string& sep = " ");

}  // namespace softaug
