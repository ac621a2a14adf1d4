#pragma once

#include <cmath>
#include <string>

#include "semnav/core/binio.hpp"
#include "semnav/sensor/render.hpp"

namespace semnav::sensor {

// Frame dump formats. Depth: 8-byte header "DPTH" + width/height as u16 LE,
// then row-major u16 LE millimeters with 0 for the out-of-range sentinel.
// Semantics: header "SEMG" + width/height, then row-major u8 labels.

inline void save_depth(const DepthImage& img, const std::string& path) {
  BinWriter w;
  w.magic("DPTH");
  w.u16(uint16_t(img.width));
  w.u16(uint16_t(img.height));
  for (float z : img.z) {
    if (!std::isfinite(z)) {
      w.u16(0);
    } else {
      double mm = std::round(double(z) * 1000.0);
      w.u16(uint16_t(std::min(mm, 65535.0)));
    }
  }
  w.save(path);
}

inline DepthImage load_depth(const std::string& path) {
  BinReader r = BinReader::from_file(path);
  r.expect_magic("DPTH");
  DepthImage img;
  img.width = r.u16();
  img.height = r.u16();
  img.z.resize(size_t(img.width) * size_t(img.height));
  for (auto& z : img.z) {
    uint16_t mm = r.u16();
    z = mm == 0 ? kDepthSentinel : float(mm) / 1000.0f;
  }
  if (r.remaining() != 0) throw ParseError("trailing bytes in depth dump", long(r.offset()));
  return img;
}

inline void save_semantics(const SemanticImage& img, const std::string& path) {
  BinWriter w;
  w.magic("SEMG");
  w.u16(uint16_t(img.width));
  w.u16(uint16_t(img.height));
  w.bytes(img.labels.data(), img.labels.size());
  w.save(path);
}

inline SemanticImage load_semantics(const std::string& path) {
  BinReader r = BinReader::from_file(path);
  r.expect_magic("SEMG");
  SemanticImage img;
  img.width = r.u16();
  img.height = r.u16();
  img.labels.resize(size_t(img.width) * size_t(img.height));
  r.bytes(img.labels.data(), img.labels.size());
  if (r.remaining() != 0)
    throw ParseError("trailing bytes in semantics dump", long(r.offset()));
  return img;
}

}  // namespace semnav::sensor
