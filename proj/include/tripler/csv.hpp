#pragma once

// CSV output with a leading parameter comment and fixed 17-digit formatting.

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tripler::csv {

using Cell = std::variant<double, long, std::string>;
using Parameters = std::vector<std::pair<std::string, std::string>>;

// %.17g; the same value always prints the same way.
std::string format_double(double x);
std::string format_cell(const Cell& c);

class Writer {
public:
    // Writes "# key=value ..." and the header row. Throws std::runtime_error
    // if the file cannot be opened.
    Writer(const std::filesystem::path& path, const Parameters& params, const std::vector<std::string>& header);

    void row(const std::vector<Cell>& cells);
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace tripler::csv
