#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bridgerank::util {

std::vector<std::string_view> split(std::string_view line, char sep);

// Reads a header-first tab-separated file line by line. Line numbers are
// 1-based and count the header. A trailing '\r' is rejected (LF only).
class TsvReader {
public:
    TsvReader(std::istream& in, std::string source_name);

    // Checks the header row against the expected column names.
    void expect_header(const std::vector<std::string>& columns);
    // Reads the header row and returns it.
    std::vector<std::string> read_header();

    // False at end of input. Empty lines are skipped.
    bool next(std::vector<std::string_view>& fields);

    std::size_t line() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }

    [[noreturn]] void fail(const std::string& what) const;

private:
    std::istream& in_;
    std::string source_;
    std::string buffer_;
    std::size_t line_ = 0;
};

// Shortest round-trip decimal representation.
std::string format_double(double v);
double parse_double(std::string_view s);
std::int64_t parse_int(std::string_view s);

std::ofstream open_output(const std::string& path);

}  // namespace bridgerank::util
