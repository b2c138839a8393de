#include "uavmag/survey_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uavmag {

std::string FileProvenance::header_line() const {
  std::ostringstream os;
  os << "# tool=uavmag version=" << tool_version << " config_hash=" << config_hash << " seeds=";
  for (std::size_t i = 0; i < seeds.size(); ++i) os << (i ? ";" : "") << seeds[i];
  if (seeds.empty()) os << "none";
  return os.str();
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_survey_csv(std::ostream& out, const SurveyRecord& r, const FileProvenance& provenance) {
  out << provenance.header_line() << '\n';
  out << "t,x1,y1,z1,b1x,b1y,b1z,b2x,b2y,b2z,tx,ty,tz\n";
  auto put = [&out](const Vec3& v) {
    out << ',' << format_double(v.x) << ',' << format_double(v.y) << ',' << format_double(v.z);
  };
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << format_double(r.times[i]);
    put(r.positions1[i]);
    put(r.b1[i]);
    put(r.b2[i]);
    put(r.truth1[i]);
    out << '\n';
  }
}

SurveyRecord read_survey_csv(std::istream& in, const Vec3& sensor_separation) {
  SurveyRecord r;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("t,x1,y1,z1", 0) != 0) throw std::runtime_error("survey CSV: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 13)
      throw std::runtime_error("survey CSV line " + std::to_string(line_no) + ": expected 13 columns, got " +
                               std::to_string(cells.size()));
    double v[13];
    for (std::size_t c = 0; c < 13; ++c) {
      const auto& s = cells[c];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v[c]);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v[c]))
        throw std::runtime_error("survey CSV line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    r.times.push_back(v[0]);
    r.positions1.push_back(Vec3{v[1], v[2], v[3]});
    r.positions2.push_back(Vec3{v[1], v[2], v[3]} + sensor_separation);
    r.b1.push_back(Vec3{v[4], v[5], v[6]});
    r.b2.push_back(Vec3{v[7], v[8], v[9]});
    r.truth1.push_back(Vec3{v[10], v[11], v[12]});
  }
  if (!header_seen) throw std::runtime_error("survey CSV: missing header");
  if (r.size() < 2) throw std::runtime_error("survey CSV: need at least two samples");
  const double dt = r.times[1] - r.times[0];
  if (!(dt > 0.0)) throw std::runtime_error("survey CSV: times must be strictly increasing");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r.times[i] > r.times[i - 1])) throw std::runtime_error("survey CSV: times must be strictly increasing");
  r.sample_rate = std::round(static_cast<double>(r.size() - 1) / (r.times.back() - r.times.front()) * 1e6) / 1e6;
  return r;
}

}  // namespace uavmag
