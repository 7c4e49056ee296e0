// Copyright 2026 The wvdst Authors
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

#ifndef WVDST_ERRORS_HPP
#define WVDST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wvdst {

/// Raised when a statistical estimate cannot be formed (vanishing trace,
/// all reference denominators skipped, zero-norm reconstruction, ...).
class EstimationFailure : public std::runtime_error {
 public:
  explicit EstimationFailure(const std::string &what) : std::runtime_error(what) {}
};

/// Postselection on an outcome whose probability is below the cutoff.
class UndefinedPointer : public std::runtime_error {
 public:
  explicit UndefinedPointer(const std::string &what) : std::runtime_error(what) {}
};

class UnsupportedDimension : public std::invalid_argument {
 public:
  explicit UnsupportedDimension(const std::string &what) : std::invalid_argument(what) {}
};

/// A calibration entry required by a hybrid run is absent.
class MissingCalibration : public std::runtime_error {
 public:
  explicit MissingCalibration(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace wvdst

#endif  // WVDST_ERRORS_HPP
