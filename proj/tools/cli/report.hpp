#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sargcert::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

struct RunManifest {
    std::string command;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::string started_at;
    std::string finished_at;
    std::string summary;  // PASS / FAIL / INFO

    nlohmann::ordered_json to_json() const;
};

/// UTC ISO-8601 timestamp; honours SOURCE_DATE_EPOCH for reproducible output.
std::string timestamp_now();

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

/// One table plus its manifest. Columns are frozen per command (see
/// docs/report_schema.md).
struct Report {
    RunManifest manifest;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();

    void add_row(std::vector<Cell> row);

    nlohmann::ordered_json to_json() const;
    /// RFC-4180 CSV preceded by '#' comment lines carrying the manifest.
    std::string to_csv() const;
    /// Aligned, rounded table for terminals.
    std::string to_text() const;
};

/// Shortest round-trip decimal representation.
std::string format_double(double v);
std::string format_display(double v, int digits = 6);

enum class Format { Text, Csv, Json };

void emit(const Report& report, Format format, std::ostream& out);

}  // namespace sargcert::cli
