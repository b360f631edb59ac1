#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nlj {

// All numeric output is decimal with 12 significant digits.
std::string format_number(double v);

// Long-format table with '#' provenance comments ahead of the header.
// Rows are stored preformatted so emission is byte-deterministic.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_comment(const std::string& line);      // without leading '#'
    void add_comment_block(const std::string& block);  // pre-formatted '#' lines

    class Row {
      public:
        explicit Row(std::size_t expect) { cells_.reserve(expect); }
        Row& num(double v);
        Row& text(std::string s);
        Row& integer(long v);
        const std::vector<std::string>& cells() const { return cells_; }

      private:
        std::vector<std::string> cells_;
    };

    Row make_row() const { return Row(header_.size()); }
    void add_row(Row row);

    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }

    void emit(std::ostream& os) const;
    std::string to_string() const;

  private:
    std::vector<std::string> comments_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace nlj
