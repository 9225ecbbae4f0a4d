#include "ergolab/cli/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ergolab::cli {

namespace {

bool needs_quotes(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quote(const std::string& s) {
    if (!needs_quotes(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}

double parse_real(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw std::invalid_argument("CSV: cannot parse number '" + s + "'");
    }
    return v;
}

std::int64_t parse_int(const std::string& s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("CSV: cannot parse integer '" + s + "'");
    return v;
}

}  // namespace

void CsvTable::add_row(std::vector<CsvValue> row) {
    if (row.size() != columns.size()) {
        std::ostringstream os;
        os << "CSV: row with " << row.size() << " cells for " << columns.size() << " columns";
        throw std::invalid_argument(os.str());
    }
    rows.push_back(std::move(row));
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("CSV: number formatting failed");
    return std::string(buf, ptr);
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    bool first = true;
    for (const auto& c : table.columns) {
        if (c.kind == CsvKind::complex) {
            out += (first ? "" : ",") + quote("re_" + c.name) + "," + quote("im_" + c.name);
        } else {
            out += (first ? "" : ",") + quote(c.name);
        }
        first = false;
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            const CsvValue& v = row[i];
            switch (table.columns[i].kind) {
                case CsvKind::integer: out += std::to_string(std::get<std::int64_t>(v)); break;
                case CsvKind::real: out += format_real(std::get<double>(v)); break;
                case CsvKind::complex: {
                    const cd z = std::get<cd>(v);
                    out += format_real(z.real()) + "," + format_real(z.imag());
                    break;
                }
                case CsvKind::text: out += quote(std::get<std::string>(v)); break;
            }
        }
        out += '\n';
    }
    return out;
}

void emit_csv(const CsvTable& table, const std::filesystem::path& path) {
    const std::string text = to_csv(table);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.close();
    if (!f) throw std::runtime_error("cannot write " + path.string() + ": " + std::strerror(errno));
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (in_quotes) throw std::invalid_argument("CSV: unterminated quoted field");
    if (any || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

CsvTable parse_csv(const std::string& text, const std::vector<CsvColumn>& schema) {
    const auto records = split_csv(text);
    if (records.empty()) throw std::invalid_argument("CSV: missing header");
    CsvTable table;
    table.columns = schema;
    std::vector<std::string> expected;
    for (const auto& c : schema) {
        if (c.kind == CsvKind::complex) {
            expected.push_back("re_" + c.name);
            expected.push_back("im_" + c.name);
        } else {
            expected.push_back(c.name);
        }
    }
    if (records[0] != expected) throw std::invalid_argument("CSV: header does not match the schema");
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != expected.size()) {
            std::ostringstream os;
            os << "CSV: record " << r + 1 << " has " << rec.size() << " fields, expected " << expected.size();
            throw std::invalid_argument(os.str());
        }
        std::vector<CsvValue> row;
        std::size_t f = 0;
        for (const auto& c : schema) {
            switch (c.kind) {
                case CsvKind::integer: row.emplace_back(parse_int(rec[f++])); break;
                case CsvKind::real: row.emplace_back(parse_real(rec[f++])); break;
                case CsvKind::complex: {
                    const double re = parse_real(rec[f++]);
                    const double im = parse_real(rec[f++]);
                    row.emplace_back(cd{re, im});
                    break;
                }
                case CsvKind::text: row.emplace_back(rec[f++]); break;
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace ergolab::cli
