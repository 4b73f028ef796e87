#pragma once

// Flat-file output: RFC 4180 CSV with round-trip doubles, atomic writes,
// SHA-256 digests and the JSON run manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace memwalk {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double x);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view s);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
    /// Header line first, CRLF-free ("\n") line endings.
    std::string to_csv() const;
};

std::string sha256_hex(std::string_view data);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct OutputFile {
    std::string name;  ///< relative to the output directory
    std::string sha256;
    std::uint64_t bytes = 0;
};

/// Collects the files of one run and writes manifest.json next to them.
class RunRecorder {
public:
    RunRecorder(std::filesystem::path dir, std::string subcommand, nlohmann::json parameters);

    /// Atomically writes `content` to dir/name and records its digest.
    void write(const std::string& name, std::string_view content);

    /// Writes manifest.json (atomically) and returns its path.
    std::filesystem::path finish();

    const std::vector<OutputFile>& outputs() const { return outputs_; }

private:
    std::filesystem::path dir_;
    std::string subcommand_;
    nlohmann::json parameters_;
    std::string started_;
    std::vector<OutputFile> outputs_;
};

/// Current UTC time as ISO 8601 with millisecond precision.
std::string utc_timestamp();

}  // namespace memwalk
