#include "plreg/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "plreg/errors.hpp"

namespace plreg {

std::string fmt_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == name) return static_cast<int>(j);
    throw usage_error("column '" + name + "' not found in data file");
}

Eigen::VectorXd CsvTable::numeric_column(const std::string& name) const {
    const int j = column_index(name);
    Eigen::VectorXd out(rows());
    for (int i = 0; i < rows(); ++i) {
        const std::string& cell = cells[i][j];
        double v = 0.0;
        const auto res =
            std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
            throw usage_error("data row " + std::to_string(i + 2) + ", column " +
                              std::to_string(j + 1) + ": '" + cell +
                              "' is not a number");
        out[i] = v;
    }
    return out;
}

namespace {

std::string strip_quotes(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line, int lineno) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(strip_quotes(cur));
            cur.clear();
        } else if (c == '\r') {
            continue;
        } else {
            cur += c;
        }
    }
    out.push_back(strip_quotes(cur));
    if (out.empty())
        throw usage_error("line " + std::to_string(lineno) + ": empty record");
    return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open data file '" + path + "'");
    CsvTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto fields = split_csv_line(line, lineno);
        if (lineno == 1) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size())
            throw usage_error(path + ": line " + std::to_string(lineno) + ": " +
                              std::to_string(fields.size()) + " fields, header has " +
                              std::to_string(t.header.size()));
        t.cells.push_back(std::move(fields));
    }
    if (t.header.empty()) throw usage_error(path + ": missing header row");
    return t;
}

std::uint64_t column_hash(const CsvTable& table,
                          const std::vector<std::string>& columns) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0x1f;
        h *= 1099511628211ULL;
    };
    mix(std::to_string(table.rows()));
    for (const auto& name : columns) {
        const int j = table.column_index(name);
        mix(name);
        for (const auto& row : table.cells) mix(row[j]);
    }
    return h;
}

void Document::add_section(const std::string& name) {
    lines_.push_back("[" + name + "]");
    current_section_ = name;
}

void Document::add_kv(const std::string& key, const std::string& value) {
    lines_.push_back(key + " = " + value);
    values_[current_section_ + "/" + key] = value;
    order_.emplace_back(current_section_, key);
}

void Document::add_blank() { lines_.push_back(""); }

Document Document::parse(const std::string& text) {
    Document doc;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        doc.lines_.push_back(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            doc.current_section_ = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find(" = ");
        if (eq == std::string::npos)
            throw usage_error("malformed document line: '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        doc.values_[doc.current_section_ + "/" + key] = value;
        doc.order_.emplace_back(doc.current_section_, key);
    }
    return doc;
}

Document Document::load(const std::string& path) {
    return parse(read_file(path));
}

std::string Document::serialize() const {
    std::string out;
    for (const auto& l : lines_) {
        out += l;
        out += '\n';
    }
    return out;
}

void Document::save(const std::string& path) const {
    write_file(path, serialize());
}

std::optional<std::string> Document::get(const std::string& section,
                                         const std::string& key) const {
    const auto it = values_.find(section + "/" + key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Document::require(const std::string& section,
                              const std::string& key) const {
    auto v = get(section, key);
    if (!v)
        throw usage_error("missing '" + key + "' in section [" + section + "]");
    return *v;
}

double Document::require_num(const std::string& section,
                             const std::string& key) const {
    const std::string s = require(section, key);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw usage_error("value of '" + key + "' in [" + section +
                          "] is not a number: '" + s + "'");
    }
}

std::vector<std::pair<std::string, std::string>> Document::section_items(
    const std::string& section) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [sec, key] : order_)
        if (sec == section) out.emplace_back(key, values_.at(sec + "/" + key));
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace plreg
