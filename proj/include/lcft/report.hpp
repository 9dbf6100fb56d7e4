// CSV / JSON / manifest emission: comma-separated with a header row and 17
// significant digits, so identical runs produce identical bytes.
#pragma once

#include <string>
#include <vector>

#include "lcft/estimates.hpp"

namespace lcft {

std::string format_g17(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void add(std::initializer_list<std::string> cells);
  const std::string& text() const { return text_; }
  void write(const std::string& path) const;

 private:
  size_t width_;
  std::string text_;
};

// standard row layout for estimate reports:
// experiment_id,t_or_level,num,den,ratio,q,pass
CsvWriter report_csv(const std::vector<EstimateReport>& reports);

// json summary with fitted exponents and pass flags (nlohmann behind the scenes)
std::string report_json(const std::vector<EstimateReport>& reports, uint64_t config_hash,
                        uint64_t seed);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// manifest: config hash + seed + code version + completion status; written
// incomplete at start and rewritten complete at the end, so an interrupted
// run leaves the partial marker behind
void write_manifest(const std::string& path, uint64_t config_hash, uint64_t seed,
                    bool complete);

extern const char* kVersion;

}  // namespace lcft
