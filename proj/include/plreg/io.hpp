#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace plreg {

// All report numerals go through this: 12 significant digits, %g format, so
// golden files are byte-stable and a parse/serialize round trip is the
// identity.
std::string fmt_num(double x);

// Strict CSV: comma separated, header row required, '.' decimal point, UTF-8,
// optional surrounding double quotes on cells. Parse failures carry
// line/column positions.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> cells;  // raw text per row

    int rows() const { return static_cast<int>(cells.size()); }
    int column_index(const std::string& name) const;  // usage_error if absent
    Eigen::VectorXd numeric_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

// FNV-1a over the textual cells of the named columns plus the row count;
// binds a fit artifact to the data file it was computed from.
std::uint64_t column_hash(const CsvTable& table,
                          const std::vector<std::string>& columns);

// Line-preserving key/value document with [section] headers. Values are
// stored as raw strings so that parse -> serialize returns the input bytes.
class Document {
public:
    void add_section(const std::string& name);
    void add_kv(const std::string& key, const std::string& value);
    void add_blank();

    static Document parse(const std::string& text);
    static Document load(const std::string& path);
    std::string serialize() const;
    void save(const std::string& path) const;

    std::optional<std::string> get(const std::string& section,
                                   const std::string& key) const;
    std::string require(const std::string& section, const std::string& key) const;
    double require_num(const std::string& section, const std::string& key) const;
    // all keys of a section, in file order
    std::vector<std::pair<std::string, std::string>> section_items(
        const std::string& section) const;

private:
    std::vector<std::string> lines_;
    std::string current_section_;
    std::map<std::string, std::string> values_;  // "section/key" -> value
    std::vector<std::pair<std::string, std::string>> order_;  // section, key
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace plreg
