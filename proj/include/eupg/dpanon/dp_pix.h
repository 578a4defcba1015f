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

#ifndef EUPG_DPANON_DP_PIX_H_
#define EUPG_DPANON_DP_PIX_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eupg/common/rng.h"

namespace eupg::dpanon {

// 8-bit image, interleaved channels, rows top to bottom.
struct PixelImage {
  size_t width = 0;
  size_t height = 0;
  size_t channels = 1;
  std::vector<uint8_t> pixels;

  uint8_t at(size_t x, size_t y, size_t c) const {
    return pixels[(y * width + x) * channels + c];
  }
  void Validate() const;
};

// Laplace scale of DP-Pix: global sensitivity 255 m / b^2 over epsilon,
// where m is the number of pixels allowed to differ between neighbouring
// images.
double DpPixScale(size_t b, size_t m, double epsilon);

// Mean of every b x b block, per channel; blocks in row-major order with
// channels innermost.
std::vector<double> BlockMeans(const PixelImage& img, size_t b);

// Pixelization without noise: each block becomes its rounded mean.
PixelImage Pixelize(const PixelImage& img, size_t b);

// Each block becomes round(clamp(mean + Laplace(DpPixScale(b, m, eps)),
// 0, 255)); one draw per block and channel. width and height must be
// divisible by b.
PixelImage DpPix(const PixelImage& img, size_t b, size_t m, double epsilon,
                 Rng& rng);

// Binary PGM (P5, one channel) and PPM (P6, three channels), maxval 255.
PixelImage ReadPnm(const std::string& path);
void WritePnm(const PixelImage& img, const std::string& path);

}  // namespace eupg::dpanon

#endif  // EUPG_DPANON_DP_PIX_H_
