#include "bridgerank/util/tsv.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "bridgerank/error.hpp"

namespace bridgerank::util {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

TsvReader::TsvReader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {}

void TsvReader::fail(const std::string& what) const { throw ParseError(source_, line_, what); }

std::vector<std::string> TsvReader::read_header() {
    if (!std::getline(in_, buffer_)) {
        line_ = 1;
        fail("missing header row");
    }
    ++line_;
    if (!buffer_.empty() && buffer_.back() == '\r') fail("CRLF line ending; expected LF");
    std::vector<std::string> cols;
    for (auto f : split(buffer_, '\t')) cols.emplace_back(f);
    return cols;
}

void TsvReader::expect_header(const std::vector<std::string>& columns) {
    const auto got = read_header();
    if (got != columns) {
        std::string want;
        for (const auto& c : columns) want += (want.empty() ? "" : "\\t") + c;
        fail("header does not match schema; expected \"" + want + "\"");
    }
}

bool TsvReader::next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, buffer_)) {
        ++line_;
        if (buffer_.empty()) continue;
        if (buffer_.back() == '\r') fail("CRLF line ending; expected LF");
        fields = split(buffer_, '\t');
        return true;
    }
    return false;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw Error("not a number: \"" + std::string(s) + "\"");
    return v;
}

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw Error("not an integer: \"" + std::string(s) + "\"");
    return v;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + path);
    return out;
}

}  // namespace bridgerank::util
