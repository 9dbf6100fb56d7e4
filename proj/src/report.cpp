#include "lcft/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lcft {

const char* kVersion = "lcft 1.0.0";

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  std::string line;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) line += ',';
    line += header[i];
  }
  text_ = line + "\n";
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("csv row width mismatch");
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  text_ += line + "\n";
}

void CsvWriter::add(std::initializer_list<std::string> cells) {
  add_row(std::vector<std::string>(cells));
}

void CsvWriter::write(const std::string& path) const { write_text_file(path, text_); }

CsvWriter report_csv(const std::vector<EstimateReport>& reports) {
  CsvWriter csv({"experiment_id", "t_or_level", "num", "den", "ratio", "q", "pass"});
  for (const auto& rep : reports)
    for (const auto& r : rep.rows)
      csv.add({rep.id, format_g17(r.level), format_g17(r.num), format_g17(r.den),
               format_g17(r.ratio), format_g17(r.q), rep.pass ? "1" : "0"});
  return csv;
}

std::string report_json(const std::vector<EstimateReport>& reports, uint64_t config_hash,
                        uint64_t seed) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  auto& arr = j["experiments"];
  arr = nlohmann::ordered_json::array();
  for (const auto& rep : reports) {
    nlohmann::ordered_json e;
    e["id"] = rep.id;
    e["fitted_exponent"] = format_g17(rep.fitted_exponent);
    e["constant"] = format_g17(rep.constant);
    e["spread"] = format_g17(rep.spread);
    e["pass"] = rep.pass;
    if (!rep.note.empty()) e["note"] = rep.note;
    arr.push_back(e);
  }
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_manifest(const std::string& path, uint64_t config_hash, uint64_t seed,
                    bool complete) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["status"] = complete ? "complete" : "incomplete";
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace lcft
