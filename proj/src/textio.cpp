#include "sailfit/textio.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sailfit/error.hpp"

namespace sailfit {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return v;
}

std::optional<int> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

KvMap parse_kv_lines(const std::string& text) {
    KvMap kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Err::InvalidArgument, "malformed key=value line: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

KvMap read_kv_file(const std::string& path) {
    return parse_kv_lines(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw Error(Err::FileNotFound, path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Err::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Err::IoError, "cannot write " + path);
    out << content;
    if (!out) throw Error(Err::IoError, "write failed for " + path);
}

} // namespace sailfit
