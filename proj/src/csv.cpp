#include "gethlab/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <limits>
#include <stdexcept>

namespace gethlab::io {

std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return fmt::format("{}", *d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

CsvTable::CsvTable(std::string schema, std::vector<std::string> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {}

void CsvTable::add(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw std::invalid_argument("csv " + schema_ + ": row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
}

std::string CsvTable::render() const {
    std::string out = fmt::format("# geth-lab {} schema={}\n", kVersion, schema_);
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
    out += '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += format_cell(r[i]);
        }
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    const auto s = render();
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
}

}  // namespace gethlab::io

#include "gethlab/errors.hpp"

#include <sstream>

namespace gethlab::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

std::size_t CsvData::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw ConfigError("table " + schema + " has no column '" + name + "'");
}

double CsvData::number(std::size_t row, const std::string& name) const {
    const auto& s = rows.at(row).at(column(name));
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

const std::string& CsvData::text(std::size_t row, const std::string& name) const {
    return rows.at(row).at(column(name));
}

CsvData read_csv(const std::filesystem::path& path, const std::string& schema, const std::string& producer) {
    std::ifstream in(path);
    if (!in) throw MissingPrerequisite("missing table " + path.string(), producer);
    CsvData d;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
    const std::string expected = fmt::format("# geth-lab {} schema={}", CsvTable::kVersion, schema);
    if (line != expected) {
        throw ConfigError(path.string() + ": expected header '" + expected + "', found '" + line + "'");
    }
    d.schema = schema;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": missing column header");
    d.columns = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_csv_line(line);
        if (row.size() != d.columns.size()) throw ConfigError(path.string() + ": ragged row");
        d.rows.push_back(std::move(row));
    }
    return d;
}

}  // namespace gethlab::io
