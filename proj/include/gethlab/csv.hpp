#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace gethlab::io {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Versioned CSV: a `# geth-lab v1 schema=<name>` line, a header, then rows. Doubles use
/// shortest round-trip-safe formatting so identical inputs give identical bytes.
class CsvTable {
public:
    CsvTable(std::string schema, std::vector<std::string> columns);

    void add(std::vector<Cell> row);
    std::size_t size() const { return rows_.size(); }
    std::string render() const;
    void write(const std::filesystem::path& path) const;

    static constexpr const char* kVersion = "v1";

private:
    std::string schema_;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

std::string format_cell(const Cell& c);

}  // namespace gethlab::io

namespace gethlab::io {

/// Parsed table written by CsvTable. Throws MissingPrerequisite when the file is absent
/// (with `producer` as the command to create it) and ConfigError on a schema mismatch.
struct CsvData {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
    const std::string& text(std::size_t row, const std::string& name) const;
};

CsvData read_csv(const std::filesystem::path& path, const std::string& schema, const std::string& producer);

}  // namespace gethlab::io
