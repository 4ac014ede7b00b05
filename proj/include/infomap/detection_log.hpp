#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "infomap/detail/text.hpp"
#include "infomap/error.hpp"
#include "infomap/grid.hpp"

namespace infomap {

struct LogFrame {
  double timestamp = 0.0;
  std::vector<WorldPosition> detections;
  std::vector<WorldPosition> truths;

  friend bool operator==(const LogFrame&, const LogFrame&) = default;
};

/// Recorded detections, optionally with ground truth, frame by frame.
struct DetectionLog {
  std::vector<LogFrame> frames;

  /// Throws InvalidArgument unless timestamps strictly increase and every
  /// position is finite.
  void validate() const {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& f = frames[i];
      if (!std::isfinite(f.timestamp)) throw Error(ErrorCode::InvalidArgument, "non-finite timestamp");
      if (i > 0 && !(f.timestamp > frames[i - 1].timestamp))
        throw Error(ErrorCode::InvalidArgument, "timestamps must strictly increase (frame " + std::to_string(i) + ")");
      for (const auto& list : {std::cref(f.detections), std::cref(f.truths)})
        for (const auto& p : list.get())
          if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw Error(ErrorCode::InvalidArgument, "non-finite position in frame " + std::to_string(i));
    }
  }

  friend bool operator==(const DetectionLog&, const DetectionLog&) = default;
};

// Text form: `frame <timestamp>` opens a frame, followed by any number of
// `det <x> <y>` and `truth <x> <y>` lines. `#` starts a comment.

inline std::string write_detection_log(const DetectionLog& log) {
  using detail::format_double;
  std::string out;
  for (const auto& f : log.frames) {
    out += "frame " + format_double(f.timestamp) + "\n";
    for (const auto& d : f.detections) out += "det " + format_double(d.x) + " " + format_double(d.y) + "\n";
    for (const auto& t : f.truths) out += "truth " + format_double(t.x) + " " + format_double(t.y) + "\n";
  }
  return out;
}

inline DetectionLog parse_detection_log(std::string_view text) {
  DetectionLog log;
  for (const auto& line : detail::content_lines(text)) {
    const auto tok = detail::split_ws(line.text);
    auto number = [&](std::size_t i) {
      const auto v = detail::parse_double(tok[i]);
      if (!v || !std::isfinite(*v))
        throw Error(ErrorCode::FormatError, "bad number '" + std::string(tok[i]) + "'", line.offset);
      return *v;
    };
    if (tok[0] == "frame" && tok.size() == 2) {
      const double t = number(1);
      if (!log.frames.empty() && !(t > log.frames.back().timestamp))
        throw Error(ErrorCode::FormatError, "timestamps must strictly increase", line.offset);
      log.frames.push_back(LogFrame{t, {}, {}});
    } else if ((tok[0] == "det" || tok[0] == "truth") && tok.size() == 3) {
      if (log.frames.empty()) throw Error(ErrorCode::FormatError, "position before first frame", line.offset);
      auto& list = tok[0] == "det" ? log.frames.back().detections : log.frames.back().truths;
      list.push_back({number(1), number(2)});
    } else {
      throw Error(ErrorCode::FormatError, "expected 'frame <t>', 'det <x> <y>' or 'truth <x> <y>'", line.offset);
    }
  }
  return log;
}

inline DetectionLog load_detection_log(const std::filesystem::path& path) {
  return parse_detection_log(detail::read_file(path));
}

inline void save_detection_log(const DetectionLog& log, const std::filesystem::path& path) {
  detail::write_file(path, write_detection_log(log));
}

}  // namespace infomap
