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

#include "eupg/mlp/model_io.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "eupg/common/error.h"

namespace eupg::mlp {
namespace {

constexpr std::array<char, 8> kMagic = {'E', 'U', 'P', 'G', 'M', 'L', 'P', '\0'};

template <typename T>
void PutLe(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  char bytes[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes, sizeof(T));
}

template <typename T>
T GetLe(std::istream& in, const std::string& source) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
    throw DataError("model file '" + source + "' is truncated");
  }
  T value = 0;
  for (size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

}  // namespace

void WriteModel(const MlpModel& model, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  PutLe<uint32_t>(out, kModelFormatVersion);
  PutLe<uint32_t>(out, static_cast<uint32_t>(model.layer_dims().size()));
  for (size_t d : model.layer_dims()) PutLe<uint64_t>(out, d);
  PutLe<uint64_t>(out, model.train_seed());
  PutLe<uint32_t>(out, static_cast<uint32_t>(model.provenance().size()));
  out.write(model.provenance().data(),
            static_cast<std::streamsize>(model.provenance().size()));
  for (double p : model.FlatParameters()) {
    PutLe<uint64_t>(out, std::bit_cast<uint64_t>(p));
  }
}

MlpModel ReadModel(std::istream& in, const std::string& source) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 8 || magic != kMagic) {
    throw DataError("'" + source + "' is not an eupg model file");
  }
  const auto version = GetLe<uint32_t>(in, source);
  if (version != kModelFormatVersion) {
    throw DataError("'" + source + "': unsupported model format version " +
                    std::to_string(version));
  }
  const auto ndims = GetLe<uint32_t>(in, source);
  if (ndims < 2 || ndims > 64) {
    throw DataError("'" + source + "': implausible layer count");
  }
  std::vector<size_t> dims(ndims);
  for (auto& d : dims) {
    d = static_cast<size_t>(GetLe<uint64_t>(in, source));
    if (d == 0 || d > (size_t{1} << 24)) {
      throw DataError("'" + source + "': implausible layer dimension");
    }
  }
  const auto seed = GetLe<uint64_t>(in, source);
  const auto plen = GetLe<uint32_t>(in, source);
  if (plen > (1u << 20)) throw DataError("'" + source + "': provenance too long");
  std::string provenance(plen, '\0');
  in.read(provenance.data(), plen);
  if (in.gcount() != static_cast<std::streamsize>(plen)) {
    throw DataError("model file '" + source + "' is truncated");
  }
  std::vector<DenseLayer> layers;
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer layer;
    layer.inputs = dims[l];
    layer.outputs = dims[l + 1];
    layer.weights.resize(layer.inputs * layer.outputs);
    layer.biases.resize(layer.outputs);
    for (double& w : layer.weights) {
      w = std::bit_cast<double>(GetLe<uint64_t>(in, source));
    }
    for (double& b : layer.biases) {
      b = std::bit_cast<double>(GetLe<uint64_t>(in, source));
    }
    layers.push_back(std::move(layer));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("'" + source + "': trailing bytes after parameters");
  }
  return MlpModel(std::move(dims), std::move(layers), std::move(provenance),
                  seed);
}

void SaveModel(const MlpModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file '" + path + "'");
  WriteModel(model, out);
  if (!out) throw IoError("write to '" + path + "' failed");
}

MlpModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  return ReadModel(in, path);
}

}  // namespace eupg::mlp
