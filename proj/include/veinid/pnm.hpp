#pragma once

// Binary PGM (P5) / PPM (P6) with maxval 255. Nothing else is accepted.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/image.hpp"

namespace veinid::pnm {

namespace detail {

struct Header {
  std::string magic;
  int width = 0;
  int height = 0;
  std::size_t data_offset = 0;
};

inline void skip_space_and_comments(const std::string& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
      ++pos;
    } else if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
}

inline int read_header_int(const std::string& buf, std::size_t& pos) {
  skip_space_and_comments(buf, pos);
  if (pos >= buf.size() || !std::isdigit(static_cast<unsigned char>(buf[pos]))) {
    throw FormatError("pnm: expected integer in header");
  }
  long long v = 0;
  while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) {
    v = v * 10 + (buf[pos] - '0');
    if (v > 1'000'000) throw FormatError("pnm: header value out of range");
    ++pos;
  }
  return static_cast<int>(v);
}

inline Header parse_header(const std::string& buf, const char* expected_magic) {
  Header h;
  if (buf.size() < 2) throw FormatError("pnm: file too short");
  h.magic = buf.substr(0, 2);
  if (h.magic != expected_magic) {
    throw FormatError(std::string("pnm: expected magic ") + expected_magic +
                      ", got '" + h.magic + "'");
  }
  std::size_t pos = 2;
  h.width = read_header_int(buf, pos);
  h.height = read_header_int(buf, pos);
  const int maxval = read_header_int(buf, pos);
  if (maxval != 255) throw FormatError("pnm: only maxval 255 is supported");
  if (h.width < 1 || h.height < 1) throw FormatError("pnm: empty image");
  // Exactly one whitespace byte separates the header from the raster.
  if (pos >= buf.size() || !std::isspace(static_cast<unsigned char>(buf[pos]))) {
    throw FormatError("pnm: missing separator after header");
  }
  h.data_offset = pos + 1;
  return h;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void dump(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidParameter("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidParameter("write failed for '" + path + "'");
}

inline std::string header(const char* magic, int w, int h) {
  return std::string(magic) + "\n" + std::to_string(w) + " " +
         std::to_string(h) + "\n255\n";
}

}  // namespace detail

inline ColorImage decode_ppm(const std::string& buf) {
  const auto h = detail::parse_header(buf, "P6");
  const std::size_t need = static_cast<std::size_t>(h.width) * h.height * 3;
  if (buf.size() - h.data_offset < need) throw FormatError("ppm: truncated raster");
  ColorImage img(h.width, h.height);
  const auto* p = reinterpret_cast<const std::uint8_t*>(buf.data() + h.data_offset);
  for (auto& px : img.pixels()) {
    px = {p[0], p[1], p[2]};
    p += 3;
  }
  return img;
}

inline GrayImage decode_pgm(const std::string& buf) {
  const auto h = detail::parse_header(buf, "P5");
  const std::size_t need = static_cast<std::size_t>(h.width) * h.height;
  if (buf.size() - h.data_offset < need) throw FormatError("pgm: truncated raster");
  GrayImage img(h.width, h.height);
  const auto* p = reinterpret_cast<const std::uint8_t*>(buf.data() + h.data_offset);
  for (auto& px : img.pixels()) px = *p++;
  return img;
}

inline std::string encode_ppm(const ColorImage& img) {
  std::string out = detail::header("P6", img.width(), img.height());
  out.reserve(out.size() + img.size() * 3);
  for (const auto& px : img.pixels()) {
    out.push_back(static_cast<char>(px.r));
    out.push_back(static_cast<char>(px.g));
    out.push_back(static_cast<char>(px.b));
  }
  return out;
}

// Intensities are rounded and clamped to [0, 255].
inline std::string encode_pgm(const GrayImage& img) {
  std::string out = detail::header("P5", img.width(), img.height());
  for (double v : img.pixels()) {
    const double c = std::clamp(std::round(v), 0.0, 255.0);
    out.push_back(static_cast<char>(static_cast<std::uint8_t>(c)));
  }
  return out;
}

// Foreground 255, background 0.
inline std::string encode_pgm(const BinaryImage& img) {
  std::string out = detail::header("P5", img.width(), img.height());
  for (auto v : img.pixels()) out.push_back(static_cast<char>(v ? 255 : 0));
  return out;
}

inline ColorImage read_ppm(const std::string& path) { return decode_ppm(detail::slurp(path)); }
inline GrayImage read_pgm(const std::string& path) { return decode_pgm(detail::slurp(path)); }

inline void write_ppm(const std::string& path, const ColorImage& img) {
  detail::dump(path, encode_ppm(img));
}
inline void write_pgm(const std::string& path, const GrayImage& img) {
  detail::dump(path, encode_pgm(img));
}
inline void write_pgm(const std::string& path, const BinaryImage& img) {
  detail::dump(path, encode_pgm(img));
}

}  // namespace veinid::pnm
