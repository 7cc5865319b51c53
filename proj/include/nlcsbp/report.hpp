#ifndef NLCSBP_REPORT_HPP
#define NLCSBP_REPORT_HPP

// Artifact emission: byte-stable CSV/JSON with fixed float formatting
// (17 significant digits), LF line endings, and a full run record (config
// echo plus seed) in every JSON report.

#include <string>
#include <vector>

#include "json.hpp"

#include "nlcsbp/config.hpp"

namespace nlcsbp {

using Json = nlohmann::json;

/// %.17g rendering, the same everywhere a double is printed.
std::string format_sig(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& vals);
    std::string to_string() const;  // LF endings, trailing newline
};

/// Base JSON for a run: subcommand, seed, config_echo.
Json base_report(const RunConfig& cfg, const std::string& subcommand);

/// Write content to path, creating parent directories. Throws IoError.
void write_file(const std::string& path, const std::string& content);

}  // namespace nlcsbp

#endif
