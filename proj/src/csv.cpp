#include "tripler/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace tripler::csv {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    return std::get<std::string>(c);
}

Writer::Writer(const std::filesystem::path& path, const Parameters& params, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::out | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out_ << '#';
    for (const auto& [k, v] : params) out_ << ' ' << k << '=' << v;
    out_ << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void Writer::row(const std::vector<Cell>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("csv row has the wrong number of columns");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_cell(cells[i]);
    out_ << '\n';
    if (!out_) throw std::runtime_error("write to " + path_.string() + " failed");
}

}  // namespace tripler::csv
