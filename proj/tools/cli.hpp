#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace symlab::cli {

inline constexpr const char* version = "0.1.0";

using Cell = std::variant<long long, double, bool, std::string>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

enum class Format
{
    csv,
    json
};

/// CSV: mandatory header, '.' decimals, LF line endings, no quoting.
std::string to_csv(const Table& table);

/// {"meta": {...}, "rows": [{column: value, ...}, ...]}.
std::string to_json(const Table& table, const std::map<std::string, std::string>& config, double wall_time);

/// Writes the report; throws symlab::config_error when the path cannot be written.
void emit_report(const Table& table, Format format, const std::string& path,
    const std::map<std::string, std::string>& config, double wall_time);

/// Exit codes: 0 all checks pass, 1 an inequality or comparison fails beyond
/// tolerance, 2 configuration or domain error (including unwritable output).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace symlab::cli
