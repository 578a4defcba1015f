// Copyright 2026 The EUPG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eupg/dpanon/dp_pix.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "eupg/common/error.h"
#include "eupg/dpanon/mechanisms.h"

namespace eupg::dpanon {
namespace {

void CheckBlocks(const PixelImage& img, size_t b) {
  img.Validate();
  if (b == 0) throw InvalidArgumentError("block size must be positive");
  if (img.width % b != 0 || img.height % b != 0) {
    throw InvalidArgumentError("image " + std::to_string(img.width) + "x" +
                               std::to_string(img.height) +
                               " is not divisible into " + std::to_string(b) +
                               "x" + std::to_string(b) + " blocks");
  }
}

// Writes value v into every pixel of block (bx, by), channel c.
void FillBlock(PixelImage& img, size_t b, size_t bx, size_t by, size_t c,
               uint8_t v) {
  for (size_t y = by * b; y < (by + 1) * b; ++y) {
    for (size_t x = bx * b; x < (bx + 1) * b; ++x) {
      img.pixels[(y * img.width + x) * img.channels + c] = v;
    }
  }
}

uint8_t ToPixel(double v) {
  return static_cast<uint8_t>(std::round(std::clamp(v, 0.0, 255.0)));
}

size_t ReadHeaderNumber(std::istream& in, const std::string& path) {
  while (true) {
    in >> std::ws;
    if (in.peek() == '#') {
      std::string comment;
      std::getline(in, comment);
      continue;
    }
    size_t v = 0;
    if (!(in >> v)) throw DataError("'" + path + "': malformed PNM header");
    return v;
  }
}

}  // namespace

void PixelImage::Validate() const {
  if (channels == 0) throw DataError("image must have at least one channel");
  if (pixels.size() != width * height * channels) {
    throw DataError("pixel buffer does not match width x height x channels");
  }
}

double DpPixScale(size_t b, size_t m, double epsilon) {
  if (b == 0 || m == 0) throw InvalidArgumentError("b and m must be positive");
  const double sensitivity = 255.0 * static_cast<double>(m) /
                             static_cast<double>(b * b);
  return LaplaceScale(sensitivity, epsilon);
}

std::vector<double> BlockMeans(const PixelImage& img, size_t b) {
  CheckBlocks(img, b);
  const size_t bw = img.width / b, bh = img.height / b;
  std::vector<double> means(bw * bh * img.channels, 0.0);
  for (size_t by = 0; by < bh; ++by) {
    for (size_t bx = 0; bx < bw; ++bx) {
      for (size_t c = 0; c < img.channels; ++c) {
        double sum = 0.0;
        for (size_t y = by * b; y < (by + 1) * b; ++y) {
          for (size_t x = bx * b; x < (bx + 1) * b; ++x) sum += img.at(x, y, c);
        }
        means[(by * bw + bx) * img.channels + c] =
            sum / static_cast<double>(b * b);
      }
    }
  }
  return means;
}

PixelImage Pixelize(const PixelImage& img, size_t b) {
  const auto means = BlockMeans(img, b);
  PixelImage out = img;
  const size_t bw = img.width / b, bh = img.height / b;
  for (size_t by = 0; by < bh; ++by) {
    for (size_t bx = 0; bx < bw; ++bx) {
      for (size_t c = 0; c < img.channels; ++c) {
        FillBlock(out, b, bx, by, c,
                  ToPixel(means[(by * bw + bx) * img.channels + c]));
      }
    }
  }
  return out;
}

PixelImage DpPix(const PixelImage& img, size_t b, size_t m, double epsilon,
                 Rng& rng) {
  const double scale = DpPixScale(b, m, epsilon);
  const auto means = BlockMeans(img, b);
  PixelImage out = img;
  const size_t bw = img.width / b, bh = img.height / b;
  for (size_t by = 0; by < bh; ++by) {
    for (size_t bx = 0; bx < bw; ++bx) {
      for (size_t c = 0; c < img.channels; ++c) {
        const double noisy = means[(by * bw + bx) * img.channels + c] +
                             SampleLaplace(scale, rng);
        FillBlock(out, b, bx, by, c, ToPixel(noisy));
      }
    }
  }
  return out;
}

PixelImage ReadPnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image '" + path + "'");
  std::string magic;
  in >> magic;
  PixelImage img;
  if (magic == "P5") {
    img.channels = 1;
  } else if (magic == "P6") {
    img.channels = 3;
  } else {
    throw DataError("'" + path + "': only binary PGM (P5) and PPM (P6) are supported");
  }
  img.width = ReadHeaderNumber(in, path);
  img.height = ReadHeaderNumber(in, path);
  const size_t maxval = ReadHeaderNumber(in, path);
  if (maxval != 255) throw DataError("'" + path + "': maxval must be 255");
  in.get();  // single whitespace before the raster
  img.pixels.resize(img.width * img.height * img.channels);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw DataError("'" + path + "': truncated raster");
  }
  return img;
}

void WritePnm(const PixelImage& img, const std::string& path) {
  img.Validate();
  if (img.channels != 1 && img.channels != 3) {
    throw InvalidArgumentError("PNM output needs 1 or 3 channels");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image '" + path + "'");
  out << (img.channels == 1 ? "P5" : "P6") << '\n'
      << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace eupg::dpanon
