#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sargcert::cli {

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["tool_version"] = tool_version;
    j["seed"] = seed;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["summary"] = summary;
    return j;
}

std::string timestamp_now() {
    std::time_t t{};
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string format_display(double v, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void Report::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Report: row width does not match columns");
    rows.push_back(std::move(row));
}

namespace {

nlohmann::ordered_json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return format_double(v);
                return v;
            } else return v;
        },
        c);
}

std::string cell_text(const Cell& c, bool full) {
    return std::visit(
        [full](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, double>) return full ? format_double(v) : format_display(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return v;
        },
        c);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

nlohmann::ordered_json Report::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["manifest"] = manifest.to_json();
    j["columns"] = columns;
    auto& arr = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        for (std::size_t k = 0; k < columns.size(); ++k) r[columns[k]] = cell_json(row[k]);
        arr.push_back(std::move(r));
    }
    for (const auto& [key, value] : extra.items()) j[key] = value;
    return j;
}

std::string Report::to_csv() const {
    std::ostringstream out;
    out << "# schema_version: " << kSchemaVersion << "\r\n";
    out << "# manifest: " << manifest.to_json().dump() << "\r\n";
    if (!extra.empty()) out << "# extra: " << extra.dump() << "\r\n";
    for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << csv_quote(columns[k]);
    out << "\r\n";
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << csv_quote(cell_text(row[k], true));
        out << "\r\n";
    }
    return out.str();
}

std::string Report::to_text() const {
    std::vector<std::size_t> width(columns.size());
    std::vector<std::vector<std::string>> cells;
    for (std::size_t k = 0; k < columns.size(); ++k) width[k] = columns[k].size();
    for (const auto& row : rows) {
        auto& line = cells.emplace_back();
        for (std::size_t k = 0; k < row.size(); ++k) {
            line.push_back(cell_text(row[k], false));
            width[k] = std::max(width[k], line.back().size());
        }
    }
    std::ostringstream out;
    out << manifest.command << " [" << manifest.summary << "]\n";
    auto put = [&](const std::vector<std::string>& line) {
        for (std::size_t k = 0; k < line.size(); ++k) {
            out << line[k];
            if (k + 1 < line.size()) out << std::string(width[k] - line[k].size() + 2, ' ');
        }
        out << '\n';
    };
    put(columns);
    for (const auto& line : cells) put(line);
    return out.str();
}

void emit(const Report& report, Format format, std::ostream& out) {
    switch (format) {
        case Format::Text: out << report.to_text(); break;
        case Format::Csv: out << report.to_csv(); break;
        case Format::Json: out << report.to_json().dump(2) << '\n'; break;
    }
}

}  // namespace sargcert::cli
