#include "featbench/keypoints.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "internal/numeric_text.hpp"

namespace featbench::detectors {

namespace {

using internal::format_double;
using internal::parse_double;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

KeypointSet ingest_oxford(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("malformed header (empty file): " + origin);
  }
  {
    // First line is a single number (descriptor size or 1.0); its value is
    // ignored but it must parse.
    std::istringstream hs(strip_cr(line));
    double ignored = 0.0;
    if (!(hs >> ignored) || !(hs >> std::ws).eof()) {
      throw ValidationError("malformed header: " + origin);
    }
  }
  if (!std::getline(in, line)) {
    throw ValidationError("malformed header (missing count): " + origin);
  }
  long declared = 0;
  {
    std::istringstream cs(strip_cr(line));
    if (!(cs >> declared) || !(cs >> std::ws).eof() || declared < 0) {
      throw ValidationError("malformed count line: " + origin);
    }
  }

  KeypointSet set;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (blank(line)) continue;
    std::istringstream ls(line);
    double u, v, a, b, c;
    if (!(ls >> u >> v >> a >> b >> c)) {
      throw ValidationError("malformed keypoint line: " + origin);
    }
    if (!std::isfinite(u) || !std::isfinite(v) || !std::isfinite(a) ||
        !std::isfinite(b) || !std::isfinite(c)) {
      throw ValidationError("non-finite keypoint values: " + origin);
    }
    Keypoint kp;
    kp.x = u;
    kp.y = v;
    kp.ellipse = Ellipse{a, b, c};
    kp.scale = ellipse_scale(*kp.ellipse);
    set.points.push_back(kp);
  }
  if (static_cast<long>(set.points.size()) != declared) {
    throw ValidationError(
        "count mismatch: declared " + std::to_string(declared) + ", found " +
        std::to_string(set.points.size()) + " in " + origin);
  }
  return set;
}

KeypointSet ingest_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "x,y,scale") {
    throw ValidationError("malformed header (expected \"x,y,scale\"): " +
                          origin);
  }
  KeypointSet set;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (blank(line)) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) {
      throw ValidationError("expected 3 fields per row: " + origin);
    }
    Keypoint kp;
    kp.x = parse_double(fields[0], origin);
    kp.y = parse_double(fields[1], origin);
    kp.scale = parse_double(fields[2], origin);
    if (!std::isfinite(kp.x) || !std::isfinite(kp.y) ||
        !std::isfinite(kp.scale)) {
      throw ValidationError("non-finite keypoint values: " + origin);
    }
    if (kp.scale <= 0.0) {
      throw ValidationError("non-positive keypoint scale: " + origin);
    }
    set.points.push_back(kp);
  }
  return set;
}

}  // namespace

double ellipse_scale(const Ellipse& e) {
  const double det = e.a * e.c - e.b * e.b;
  if (!(e.a > 0.0) || !(e.c > 0.0) || !(det > 0.0)) {
    throw ValidationError("non-positive-definite ellipse");
  }
  // sqrt twice rather than pow(-0.25): both sqrts are correctly rounded,
  // so clean inputs like a=c=0.01, b=0 land exactly on their radius.
  return 1.0 / std::sqrt(std::sqrt(det));
}

KeypointSet ingest_keypoints(const std::filesystem::path& path,
                             KeypointFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("unreadable keypoint file: " + path.string());
  KeypointSet set = format == KeypointFormat::kOxford
                        ? ingest_oxford(in, path.string())
                        : ingest_csv(in, path.string());
  set.image_ref = path.filename().string();
  return set;
}

std::string keypoints_to_csv(const KeypointSet& set) {
  std::string out = "x,y,scale\n";
  for (const Keypoint& kp : set.points) {
    out += format_double(kp.x);
    out += ',';
    out += format_double(kp.y);
    out += ',';
    out += format_double(kp.scale);
    out += '\n';
  }
  return out;
}

void write_keypoints_csv(const KeypointSet& set,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << keypoints_to_csv(set);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace featbench::detectors
