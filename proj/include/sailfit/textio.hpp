#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sailfit {

// 17 significant digits: lossless decimal round-trip for IEEE doubles,
// byte-stable across reruns.
std::string fmt_double(double v);

// Strict full-consumption parses; nullopt on any trailing garbage, so cells
// like "$1,200" or "n/a" are rejected rather than truncated.
std::optional<double> parse_double(const std::string& s);
std::optional<int> parse_int(const std::string& s);
std::optional<std::uint64_t> parse_u64(const std::string& s);

// Flat key=value file ('#' comments and blank lines ignored). Later keys win.
using KvMap = std::map<std::string, std::string>;
KvMap read_kv_file(const std::string& path);
KvMap parse_kv_lines(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace sailfit
