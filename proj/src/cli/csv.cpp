#include "nhqhe/cli.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nhqhe::cli {

namespace {

std::string quoted(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string format_number(double v, int precision) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0.0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        return "0";
    }
    return fmt::format("{:.{}g}", v, precision);
}

double parse_number(std::string_view text) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("no column '" + std::string(name) + "'");
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    auto line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += quoted(fields[i]);
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) {
        line(row);
    }
    return out;
}

CsvTable parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> lines;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        any = true;
        if (in_quotes) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            lines.push_back(std::move(row));
            row.clear();
            any = false;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (in_quotes) {
        throw std::invalid_argument("unterminated quoted CSV field");
    }
    if (any) {
        row.push_back(std::move(field));
        lines.push_back(std::move(row));
    }
    CsvTable t;
    if (lines.empty()) {
        return t;
    }
    t.header = std::move(lines.front());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].size() != t.header.size()) {
            throw std::invalid_argument("CSV row " + std::to_string(i) + " has " + std::to_string(lines[i].size()) +
                                        " fields, header has " + std::to_string(t.header.size()));
        }
        t.rows.push_back(std::move(lines[i]));
    }
    return t;
}

CsvTable read_csv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + file.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_csv(text.str());
}

}  // namespace nhqhe::cli
