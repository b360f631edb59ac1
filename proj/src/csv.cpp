#include "nlj/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace nlj {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void CsvTable::add_comment(const std::string& line) {
    comments_.push_back("# " + line);
}

void CsvTable::add_comment_block(const std::string& block) {
    std::istringstream in(block);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) comments_.push_back(line);
}

CsvTable::Row& CsvTable::Row::num(double v) {
    cells_.push_back(format_number(v));
    return *this;
}

CsvTable::Row& CsvTable::Row::text(std::string s) {
    cells_.push_back(std::move(s));
    return *this;
}

CsvTable::Row& CsvTable::Row::integer(long v) {
    cells_.push_back(std::to_string(v));
    return *this;
}

void CsvTable::add_row(Row row) {
    if (row.cells().size() != header_.size())
        throw std::logic_error("CSV row width does not match the header");
    rows_.push_back(row.cells());
}

void CsvTable::emit(std::ostream& os) const {
    for (const auto& c : comments_) os << c << '\n';
    for (std::size_t i = 0; i < header_.size(); ++i)
        os << header_[i] << (i + 1 < header_.size() ? "," : "");
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? "," : "");
        os << '\n';
    }
}

std::string CsvTable::to_string() const {
    std::ostringstream os;
    emit(os);
    return os.str();
}

}  // namespace nlj
