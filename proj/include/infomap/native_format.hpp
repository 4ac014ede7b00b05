#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "infomap/detail/text.hpp"
#include "infomap/error.hpp"
#include "infomap/information_map.hpp"

namespace infomap {

// Native text format:
//
//   IMAP1
//   frame=cartesian|polar
//   rows=<int>
//   cols=<int>
//   resolution=<m>[,<rad>]
//   origin_row=<int>
//   origin_col=<int>
//   vmin=<real>
//   vmax=<real>
//   oob_policy=default|nearest|error
//   oob_default=<real>
//   data
//   <cols values or `unknown`, space separated>   (rows lines, row 0 first)
//
// Reals use the shortest representation that round-trips, so
// load_native(save_native(m)) == m bit for bit.

inline std::string save_native(const InformationMap& map) {
  using detail::format_double;
  const GridSpec& spec = map.spec();
  std::string out;
  out.reserve(64 + map.values().size() * 8);
  out += "IMAP1\n";
  out += "frame=" + to_string(spec.frame) + "\n";
  out += "rows=" + std::to_string(spec.rows) + "\n";
  out += "cols=" + std::to_string(spec.cols) + "\n";
  out += "resolution=" + format_double(spec.resolution);
  if (spec.frame == Frame::Polar) out += "," + format_double(spec.bearing_resolution);
  out += "\n";
  out += "origin_row=" + std::to_string(spec.origin_row) + "\n";
  out += "origin_col=" + std::to_string(spec.origin_col) + "\n";
  out += "vmin=" + format_double(map.vmin()) + "\n";
  out += "vmax=" + format_double(map.vmax()) + "\n";
  out += "oob_policy=" + to_string(map.oob_policy()) + "\n";
  out += "oob_default=" + format_double(map.oob_default()) + "\n";
  out += "data\n";
  const auto values = map.values();
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      if (c > 0) out += ' ';
      const double v = values[static_cast<std::size_t>(r) * static_cast<std::size_t>(spec.cols) + static_cast<std::size_t>(c)];
      out += is_unknown(v) ? std::string("unknown") : format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

class NativeReader {
 public:
  explicit NativeReader(std::string_view bytes) : lines_(lines(bytes)), size_(bytes.size()) {}

  InformationMap read() {
    const Line& magic = next("magic");
    if (magic.text != "IMAP1") fail(magic.offset, "bad magic, expected IMAP1");

    GridSpec spec;
    const Line& frame_line = next("frame");
    const auto frame = header(frame_line, "frame");
    if (frame == "cartesian") {
      spec.frame = Frame::Cartesian;
    } else if (frame == "polar") {
      spec.frame = Frame::Polar;
    } else {
      fail(frame_line.offset, "unknown frame '" + std::string(frame) + "'");
    }
    spec.rows = header_int(next("rows"), "rows");
    spec.cols = header_int(next("cols"), "cols");
    if (spec.rows < 1 || spec.cols < 1) fail(lines_[pos_ - 1].offset, "grid dimensions must be positive");

    const Line& res_line = next("resolution");
    const auto res_parts = split(header(res_line, "resolution"), ',');
    const std::size_t expected_parts = spec.frame == Frame::Polar ? 2 : 1;
    if (res_parts.size() != expected_parts) fail(res_line.offset, "resolution has wrong number of components");
    spec.resolution = real(res_parts[0], res_line.offset);
    if (spec.frame == Frame::Polar) spec.bearing_resolution = real(res_parts[1], res_line.offset);
    if (!(spec.resolution > 0.0) || (spec.frame == Frame::Polar && !(spec.bearing_resolution > 0.0)))
      fail(res_line.offset, "resolution must be positive");

    spec.origin_row = header_int(next("origin_row"), "origin_row");
    spec.origin_col = header_int(next("origin_col"), "origin_col");
    const Line& vmin_line = next("vmin");
    const double vmin = real(header(vmin_line, "vmin"), vmin_line.offset);
    const Line& vmax_line = next("vmax");
    const double vmax = real(header(vmax_line, "vmax"), vmax_line.offset);
    if (!(vmin < vmax)) fail(vmax_line.offset, "vmin must be below vmax");

    const Line& oob_line = next("oob_policy");
    const auto oob_text = header(oob_line, "oob_policy");
    OobPolicy oob = OobPolicy::DefaultValue;
    if (oob_text == "default") {
      oob = OobPolicy::DefaultValue;
    } else if (oob_text == "nearest") {
      oob = OobPolicy::NearestCell;
    } else if (oob_text == "error") {
      oob = OobPolicy::Error;
    } else {
      fail(oob_line.offset, "unknown oob_policy '" + std::string(oob_text) + "'");
    }
    const Line& def_line = next("oob_default");
    const double oob_default = real(header(def_line, "oob_default"), def_line.offset);
    if (!(oob_default >= vmin && oob_default <= vmax)) fail(def_line.offset, "oob_default outside value range");

    const Line& data_line = next("data");
    if (data_line.text != "data") fail(data_line.offset, "expected 'data'");

    std::vector<double> values;
    values.reserve(spec.cell_count());
    for (int r = 0; r < spec.rows; ++r) {
      if (pos_ >= lines_.size())
        fail(size_, "count mismatch: expected " + std::to_string(spec.rows) + " data rows, got " + std::to_string(r));
      const Line& row = lines_[pos_++];
      const auto tokens = split_ws(row.text);
      if (tokens.size() != static_cast<std::size_t>(spec.cols))
        fail(row.offset, "count mismatch: row " + std::to_string(r) + " has " + std::to_string(tokens.size()) +
                             " values, expected " + std::to_string(spec.cols));
      for (auto tok : tokens) {
        const std::size_t off = row.offset + static_cast<std::size_t>(tok.data() - row.text.data());
        if (tok == "unknown") {
          values.push_back(kUnknown);
          continue;
        }
        const double v = real(tok, off);
        if (!(v >= vmin && v <= vmax)) fail(off, "value " + std::string(tok) + " outside [vmin, vmax]");
        values.push_back(v);
      }
    }
    for (; pos_ < lines_.size(); ++pos_) {
      if (!trim(lines_[pos_].text).empty()) fail(lines_[pos_].offset, "count mismatch: trailing data after last row");
    }
    return InformationMap(spec, std::move(values), vmin, vmax, oob, oob_default);
  }

 private:
  [[noreturn]] static void fail(std::size_t offset, const std::string& why) {
    throw Error(ErrorCode::FormatError, why, offset);
  }

  const Line& next(std::string_view what) {
    if (pos_ >= lines_.size()) fail(size_, "truncated input, missing " + std::string(what));
    return lines_[pos_++];
  }

  static std::string_view header(const Line& line, std::string_view key) {
    const auto eq = line.text.find('=');
    if (eq == std::string_view::npos || line.text.substr(0, eq) != key)
      fail(line.offset, "expected header '" + std::string(key) + "='");
    return line.text.substr(eq + 1);
  }

  static int header_int(const Line& line, std::string_view key) {
    const auto v = parse_int<int>(header(line, key));
    if (!v) fail(line.offset, "bad integer for " + std::string(key));
    return *v;
  }

  static double real(std::string_view tok, std::size_t offset) {
    const auto v = parse_double(tok);
    if (!v || !std::isfinite(*v)) fail(offset, "bad number '" + std::string(tok) + "'");
    return *v;
  }

  std::vector<Line> lines_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline InformationMap load_native(std::string_view bytes) { return detail::NativeReader(bytes).read(); }

inline void save_native_file(const InformationMap& map, const std::filesystem::path& path) {
  detail::write_file(path, save_native(map));
}

inline InformationMap load_native_file(const std::filesystem::path& path) {
  return load_native(detail::read_file(path));
}

}  // namespace infomap
