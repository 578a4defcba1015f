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

#ifndef EUPG_COMMON_ERROR_H_
#define EUPG_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace eupg {

// Base of every error the library throws. The CLI maps InvalidArgumentError
// and DataError to exit code 1 (configuration/validation) and everything else
// to exit code 2 (runtime failure).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is out of its valid domain.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed input data: schema files, CSV cells, utility matrices, images.
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Training diverged (NaN/Inf loss or parameters).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace eupg

#endif  // EUPG_COMMON_ERROR_H_
