#pragma once

// RFC-4180 style CSV: header first, '.' decimal separator, 17 significant
// digits, complex columns split into re_<name> and im_<name>.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/numeric.hpp"

namespace ergolab::cli {

enum class CsvKind { integer, real, complex, text };

struct CsvColumn {
    std::string name;
    CsvKind kind = CsvKind::real;
};

using CsvValue = std::variant<std::int64_t, double, cd, std::string>;

struct CsvTable {
    std::vector<CsvColumn> columns;
    std::vector<std::vector<CsvValue>> rows;

    void add_row(std::vector<CsvValue> row);
};

/// 17 significant digits, general notation.
std::string format_real(double v);

std::string to_csv(const CsvTable& table);

/// Writes the table; I/O failures are reported with the system message.
void emit_csv(const CsvTable& table, const std::filesystem::path& path);

/// Splits CSV text into records of raw fields (quotes removed).
std::vector<std::vector<std::string>> split_csv(const std::string& text);

/// Parses text produced by to_csv back into typed rows using the schema.
CsvTable parse_csv(const std::string& text, const std::vector<CsvColumn>& schema);

}  // namespace ergolab::cli
