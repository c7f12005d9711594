// Copyright 2026 The Cohesion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COHESION_IMAGE_IO_HPP
#define COHESION_IMAGE_IO_HPP

#include <png.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cohesion/image.hpp"

namespace cohesion {

namespace detail {

inline std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

inline std::string lower_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Raw 8-bit decode; returns channel count 1, 3 or 4.
struct Raster8 {
  std::size_t width = 0;
  std::size_t height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

inline Raster8 read_png(const std::filesystem::path& path, bool gray) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw Error("cannot read PNG '" + path.string() + "': " + image.message);
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGBA;
  Raster8 out;
  out.width = image.width;
  out.height = image.height;
  out.channels = gray ? 1 : 4;
  out.data.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.data.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error("cannot decode PNG '" + path.string() + "': " + msg);
  }
  return out;
}

inline void write_png(const std::filesystem::path& path, std::size_t width, std::size_t height, bool gray,
                      const std::vector<std::uint8_t>& data) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, data.data(), 0, nullptr))
    throw Error("cannot write PNG '" + path.string() + "': " + image.message);
}

inline std::string read_pnm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      tok.push_back(c);
      break;
    }
  }
  while (in.get(c) && !std::isspace(static_cast<unsigned char>(c))) tok.push_back(c);
  return tok;
}

inline Raster8 read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string magic = read_pnm_token(in);
  if (magic != "P6" && magic != "P5") throw Error("unsupported PNM variant in '" + path.string() + "'");
  Raster8 out;
  try {
    out.width = std::stoul(read_pnm_token(in));
    out.height = std::stoul(read_pnm_token(in));
    if (std::stoul(read_pnm_token(in)) != 255) throw Error("only 8-bit PNM is supported");
  } catch (const std::logic_error&) {
    throw Error("malformed PNM header in '" + path.string() + "'");
  }
  out.channels = magic == "P6" ? 3 : 1;
  out.data.resize(out.width * out.height * static_cast<std::size_t>(out.channels));
  in.read(reinterpret_cast<char*>(out.data.data()), static_cast<std::streamsize>(out.data.size()));
  if (!in) throw Error("truncated PNM data in '" + path.string() + "'");
  return out;
}

inline Raster8 read_raster(const std::filesystem::path& path, bool gray) {
  if (!std::filesystem::exists(path)) throw Error("no such file '" + path.string() + "'");
  const std::string ext = lower_extension(path);
  Raster8 r;
  if (ext == ".png") {
    r = read_png(path, gray);
  } else if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") {
    r = read_pnm(path);
  } else {
    throw Error("unsupported image format '" + ext + "'");
  }
  if (r.width == 0 || r.height == 0) throw Error("zero-dimension image '" + path.string() + "'");
  return r;
}

}  // namespace detail

/// Loads an 8-bit PNG (RGB/RGBA/gray; alpha dropped) or binary PPM into [0,1]
/// channel values.
inline RgbImage load_image(const std::filesystem::path& path) {
  detail::Raster8 r = detail::read_raster(path, false);
  RgbImage img(r.width, r.height);
  const std::size_t n = r.width * r.height;
  for (std::size_t i = 0; i < n; ++i) {
    Rgb px;
    for (int c = 0; c < 3; ++c) {
      const int src = r.channels == 1 ? 0 : c;
      px[static_cast<std::size_t>(c)] = r.data[i * static_cast<std::size_t>(r.channels) + static_cast<std::size_t>(src)] / 255.0;
    }
    img.set(i, px);
  }
  return img;
}

/// Writes PNG or PPM depending on the extension, 8 bits per channel.
inline void save_image(const RgbImage& img, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(img.values().size());
  std::transform(img.values().begin(), img.values().end(), bytes.begin(), detail::quantize);
  const std::string ext = detail::lower_extension(path);
  if (ext == ".png") {
    detail::write_png(path, img.width(), img.height(), false, bytes);
  } else if (ext == ".ppm") {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("cannot write '" + path.string() + "'");
  } else {
    throw Error("unsupported output format '" + ext + "'");
  }
}

/// Quantizes `map` from [lo,hi] to 8 bits and writes PGM (P5) or gray PNG.
inline void save_gray(const GrayMap& map, const std::filesystem::path& path, double lo = 0.0, double hi = 255.0) {
  std::vector<std::uint8_t> bytes(map.size());
  const double span = hi - lo;
  for (std::size_t i = 0; i < map.size(); ++i)
    bytes[i] = detail::quantize(span > 0.0 ? (map[i] - lo) / span : 0.0);
  const std::string ext = detail::lower_extension(path);
  if (ext == ".png") {
    detail::write_png(path, map.width(), map.height(), true, bytes);
  } else if (ext == ".pgm") {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << map.width() << ' ' << map.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("cannot write '" + path.string() + "'");
  } else {
    throw Error("unsupported output format '" + ext + "'");
  }
}

/// Reads a gray raster (PNG or PGM) as 0..255 values.
inline GrayMap load_gray(const std::filesystem::path& path) {
  detail::Raster8 r = detail::read_raster(path, true);
  GrayMap map(r.width, r.height);
  const std::size_t stride = static_cast<std::size_t>(r.channels);
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (stride == 3) {
      map[i] = (r.data[3 * i] + r.data[3 * i + 1] + r.data[3 * i + 2]) / 3.0;
    } else {
      map[i] = r.data[i * stride];
    }
  }
  return map;
}

/// Ground-truth mask loader; pixels >= 128 are foreground.
inline Mask load_mask(const std::filesystem::path& path) {
  GrayMap g = load_gray(path);
  Mask m(g.width(), g.height());
  for (std::size_t i = 0; i < g.size(); ++i) m.set(i, g[i] >= 128.0);
  return m;
}

inline void save_mask(const Mask& mask, const std::filesystem::path& path) {
  GrayMap g(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) g[i] = mask[i] ? 255.0 : 0.0;
  save_gray(g, path);
}

/// Bilinear resize to `target_width` (pixel-center sampling). The height keeps
/// the aspect ratio and is clamped to at least 3.
inline RgbImage resize_to_width(const RgbImage& img, std::size_t target_width) {
  if (target_width < 3) throw Error("resize_to_width: target width must be >= 3");
  if (img.width() == target_width) return img;
  const std::size_t w = img.width(), h = img.height();
  const auto th = std::max<std::size_t>(
      3, static_cast<std::size_t>(std::lround(static_cast<double>(h) * static_cast<double>(target_width) /
                                              static_cast<double>(w))));
  const double sx = static_cast<double>(w) / static_cast<double>(target_width);
  const double sy = static_cast<double>(h) / static_cast<double>(th);
  RgbImage out(target_width, th);
  for (std::size_t r = 0; r < th; ++r) {
    const double fy = std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0, static_cast<double>(h - 1));
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const double ay = fy - static_cast<double>(y0);
    for (std::size_t c = 0; c < target_width; ++c) {
      const double fx = std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0, static_cast<double>(w - 1));
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const double ax = fx - static_cast<double>(x0);
      const Rgb p00 = img.at(y0, x0), p01 = img.at(y0, x1), p10 = img.at(y1, x0), p11 = img.at(y1, x1);
      Rgb px;
      for (std::size_t k = 0; k < 3; ++k) {
        const double top = p00[k] + ax * (p01[k] - p00[k]);
        const double bot = p10[k] + ax * (p11[k] - p10[k]);
        px[k] = std::clamp(top + ay * (bot - top), 0.0, 1.0);
      }
      out.set(r, c, px);
    }
  }
  return out;
}

/// Nearest-neighbor resize for ground-truth masks; keeps masks binary.
inline Mask resize_mask(const Mask& mask, std::size_t width, std::size_t height) {
  if (mask.width() == width && mask.height() == height) return mask;
  Mask out(width, height);
  for (std::size_t r = 0; r < height; ++r) {
    const auto sr = std::min(mask.height() - 1, r * mask.height() / height);
    for (std::size_t c = 0; c < width; ++c) {
      const auto sc = std::min(mask.width() - 1, c * mask.width() / width);
      out.set(r, c, mask.at(sr, sc));
    }
  }
  return out;
}

/// Crops the rectangle [top,bottom) x [left,right).
inline RgbImage crop(const RgbImage& img, std::size_t top, std::size_t left, std::size_t bottom, std::size_t right) {
  if (bottom <= top || right <= left || bottom > img.height() || right > img.width())
    throw Error("crop: rectangle outside image");
  RgbImage out(right - left, bottom - top);
  for (std::size_t r = top; r < bottom; ++r)
    for (std::size_t c = left; c < right; ++c) out.set(r - top, c - left, img.at(r, c));
  return out;
}

namespace detail {

// Largest per-channel variance over pixels (r, c) for r in [r0,r1), c in [c0,c1).
inline double line_variance(const RgbImage& img, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
  double worst = 0.0;
  const double n = static_cast<double>((r1 - r0) * (c1 - c0));
  for (std::size_t k = 0; k < 3; ++k) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t r = r0; r < r1; ++r)
      for (std::size_t c = c0; c < c1; ++c) {
        const double v = img.at(r, c)[k];
        s += v;
        s2 += v * v;
      }
    worst = std::max(worst, s2 / n - (s / n) * (s / n));
  }
  return worst;
}

}  // namespace detail

/// Strips outermost rows and columns whose channel variance is below
/// `variance_threshold`. Never returns less than 3x3; a fully uniform image
/// yields its central 3x3 block.
inline RgbImage crop_uniform_borders(const RgbImage& img, double variance_threshold = 1e-4) {
  const std::size_t w = img.width(), h = img.height();
  if (w < 3 || h < 3) return img;
  auto row_flat = [&](std::size_t r) { return detail::line_variance(img, r, r + 1, 0, w) < variance_threshold; };
  std::size_t top = 0, bottom = h;
  while (top < h && row_flat(top)) ++top;
  if (top == h) {
    const std::size_t r0 = (h - 3) / 2, c0 = (w - 3) / 2;
    return crop(img, r0, c0, r0 + 3, c0 + 3);
  }
  while (bottom > top && row_flat(bottom - 1)) --bottom;
  auto col_flat = [&](std::size_t c) {
    return detail::line_variance(img, top, bottom, c, c + 1) < variance_threshold;
  };
  std::size_t left = 0, right = w;
  while (left < w && col_flat(left)) ++left;
  while (right > left && col_flat(right - 1)) --right;
  if (left >= right) {
    left = w / 2;
    right = left + 1;
  }
  // Grow symmetrically back to 3x3 if the kept region is thinner.
  auto grow = [](std::size_t& lo, std::size_t& hi, std::size_t limit) {
    while (hi - lo < 3) {
      if (lo > 0) --lo;
      if (hi - lo < 3 && hi < limit) ++hi;
    }
  };
  grow(top, bottom, h);
  grow(left, right, w);
  return crop(img, top, left, bottom, right);
}

}  // namespace cohesion

#endif  // COHESION_IMAGE_IO_HPP
