#include "nlcsbp/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlcsbp/errors.hpp"

namespace nlcsbp {

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvTable::add_row(const std::vector<double>& vals) {
    std::vector<std::string> row;
    row.reserve(vals.size());
    for (double v : vals) row.push_back(format_sig(v));
    rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ",";
        out += header[i];
    }
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += row[i];
        }
        out += "\n";
    }
    return out;
}

Json base_report(const RunConfig& cfg, const std::string& subcommand) {
    Json j;
    j["subcommand"] = subcommand;
    j["seed"] = cfg.run.seed;
    j["config_echo"] = cfg.echo();
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);  // binary keeps LF endings
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace nlcsbp
