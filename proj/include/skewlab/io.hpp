#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace skewlab {

// CSV with '#'-prefixed metadata lines, then a single header row.
class CsvWriter {
  public:
    CsvWriter(std::string path, std::vector<std::string> columns);

    void meta(const std::string& key, const std::string& value);
    void row(const std::vector<std::string>& cells);
    void row_values(const std::vector<double>& cells);
    void write(); // flushes to disk

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::string> rows_;
};

std::string format_double(double v);

// FNV-1a 64-bit content digest, hex-encoded.
std::string fnv1a64_file(const std::string& path);

// Sidecar JSON describing one CLI run: command line, resolved configuration,
// seeds, wall times, and a digest per output file. Re-running the recorded
// command must reproduce identical digests.
class RunManifest {
  public:
    RunManifest(int argc, char** argv);

    void set_config(const std::string& key, const std::string& value);
    void set_config(const std::string& key, double value);
    void set_config(const std::string& key, std::int64_t value);
    void set_seed(const std::string& key, std::uint64_t value);
    void add_timing(const std::string& phase, double seconds);
    void add_output(const std::string& path);

    void write(const std::string& path) const;

  private:
    std::string command_line_;
    std::map<std::string, std::string> config_;
    std::map<std::string, std::uint64_t> seeds_;
    std::vector<std::pair<std::string, double>> timings_;
    std::vector<std::string> outputs_;
};

inline constexpr const char* k_version = "0.1.0";

} // namespace skewlab
