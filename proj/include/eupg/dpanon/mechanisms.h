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

#ifndef EUPG_DPANON_MECHANISMS_H_
#define EUPG_DPANON_MECHANISMS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "eupg/common/rng.h"
#include "eupg/data/schema.h"

namespace eupg::dpanon {

// Inverse-CDF Laplace transform of u in (-1/2, 1/2):
// -scale * sign(u) * ln(1 - 2|u|).
double LaplaceFromUniform(double u, double scale);

// One Laplace(0, scale) draw from a single uniform. scale must be > 0.
double SampleLaplace(double scale, Rng& rng);

// Laplace scale for sensitivity `sensitivity` at budget `epsilon`.
double LaplaceScale(double sensitivity, double epsilon);

struct NumericPerturbation {
  std::vector<double> values;
  size_t clamped_cells = 0;
};

// Adds Laplace(sensitivity / eps_attr) noise to every cell, then clamps into
// `clamp_range` when given.
NumericPerturbation PerturbNumeric(
    std::span<const double> column, double sensitivity, double eps_attr,
    Rng& rng, std::optional<data::NumericRange> clamp_range = std::nullopt);

// Exponential mechanism over a categorical attribute's labels. utility is a
// row-major categories x categories matrix: utility[current][candidate].
struct CategoricalMechanism {
  size_t categories = 0;
  std::vector<double> utility;
  double sensitivity = 1.0;

  // u(a, b) = 1 if a == b else 0, sensitivity 1.
  static CategoricalMechanism Identity(size_t categories);
  void Validate() const;
};

// P(candidate | current) proportional to exp(eps * u(current, c) / (2 du)).
// Throws DataError when every utility in the row is -inf.
std::vector<double> ExponentialProbabilities(const CategoricalMechanism& mech,
                                             size_t current, double eps_attr);

size_t ExponentialSelect(size_t current, const CategoricalMechanism& mech,
                         double eps_attr, Rng& rng);

}  // namespace eupg::dpanon

#endif  // EUPG_DPANON_MECHANISMS_H_
