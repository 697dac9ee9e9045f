#include "skewlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "skewlab/errors.hpp"

#include "json.hpp"

namespace skewlab {

CsvWriter::CsvWriter(std::string path, std::vector<std::string> columns)
    : path_(std::move(path)), columns_(std::move(columns)) {}

void CsvWriter::meta(const std::string& key, const std::string& value) {
    meta_.emplace_back(key, value);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    rows_.push_back(os.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void CsvWriter::row_values(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_double(v));
    row(s);
}

void CsvWriter::write() {
    std::ofstream out(path_);
    if (!out) throw input_error("cannot write " + path_);
    for (const auto& [k, v] : meta_) out << "# " << k << ": " << v << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << "\n";
    for (const auto& r : rows_) out << r << "\n";
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot digest " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

RunManifest::RunManifest(int argc, char** argv) {
    std::ostringstream os;
    for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
    command_line_ = os.str();
}

void RunManifest::set_config(const std::string& key, const std::string& value) {
    config_[key] = value;
}
void RunManifest::set_config(const std::string& key, double value) {
    config_[key] = format_double(value);
}
void RunManifest::set_config(const std::string& key, std::int64_t value) {
    config_[key] = std::to_string(value);
}
void RunManifest::set_seed(const std::string& key, std::uint64_t value) { seeds_[key] = value; }
void RunManifest::add_timing(const std::string& phase, double seconds) {
    timings_.emplace_back(phase, seconds);
}
void RunManifest::add_output(const std::string& path) { outputs_.push_back(path); }

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["version"] = k_version;
    j["command_line"] = command_line_;
    j["config"] = config_;
    j["seeds"] = seeds_;
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [phase, sec] : timings_) t[phase] = sec;
    j["timings_sec"] = t;
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& p : outputs_) outs.push_back({{"file", p}, {"fnv1a64", fnv1a64_file(p)}});
    j["outputs"] = outs;
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace skewlab
