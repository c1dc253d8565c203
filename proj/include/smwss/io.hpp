#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace smwss {

/// Incremental SHA-256 over typed key/value pairs. Doubles are hashed through
/// their shortest round-trip decimal form so fingerprints are platform stable.
class Fingerprint {
public:
    Fingerprint& add(std::string_view key, std::string_view value);
    Fingerprint& add(std::string_view key, double value);
    Fingerprint& add(std::string_view key, long long value);
    Fingerprint& add(std::string_view key, int value) { return add(key, static_cast<long long>(value)); }
    Fingerprint& add(std::string_view key, const char* value) { return add(key, std::string_view(value)); }
    Fingerprint& add(std::string_view key, bool value) { return add(key, std::string_view(value ? "true" : "false")); }
    /// Hex digest of everything added so far.
    std::string hex() const;

private:
    std::string buffer_;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Minimal CSV builder: '#'-prefixed comment header lines, then a column row.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    CsvWriter& comment(std::string_view line);
    CsvWriter& row(const std::vector<std::string>& cells);
    CsvWriter& row_numbers(const std::vector<double>& cells);
    std::string str() const;
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

private:
    std::vector<std::string> comments_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace smwss
