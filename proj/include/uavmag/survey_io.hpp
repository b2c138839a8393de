#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uavmag/scenario.hpp"

namespace uavmag {

/// Free-form "# key=value" lines written at the top of every output file.
struct FileProvenance {
  std::string tool_version;
  std::string config_hash;
  std::vector<std::uint64_t> seeds;

  [[nodiscard]] std::string header_line() const;
};

/// Columns: t, x1,y1,z1, b1x,b1y,b1z, b2x,b2y,b2z, tx,ty,tz.
void write_survey_csv(std::ostream& out, const SurveyRecord& record, const FileProvenance& provenance);

/// Reads a survey CSV. positions2 is rebuilt as positions1 + sensor_separation.
SurveyRecord read_survey_csv(std::istream& in, const Vec3& sensor_separation = Vec3{0.0, 0.0, -0.10});

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Splits one CSV line on commas (no quoting support; our files never need it).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace uavmag
