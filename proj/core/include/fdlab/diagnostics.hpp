#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "fdlab/asymptotics.hpp"
#include "fdlab/cauchy.hpp"

namespace fdlab {

/// Compact JSON objects, one per report.
std::string to_json(const PicardReport& report);
std::string to_json(const ContourReport& report);
std::string to_json(const DecayFit& fit, std::string_view theorem_case);

/// Appends {"event": ..., "data": ...} records, one per line.
class JsonLinesWriter {
 public:
  explicit JsonLinesWriter(const std::filesystem::path& path);
  void write(std::string_view event, std::string_view json_object);

 private:
  std::ofstream out_;
};

}  // namespace fdlab
