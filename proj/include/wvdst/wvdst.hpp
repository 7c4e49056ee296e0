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

#ifndef WVDST_WVDST_HPP
#define WVDST_WVDST_HPP

#include "wvdst/baselines.hpp"
#include "wvdst/bases.hpp"
#include "wvdst/calibration.hpp"
#include "wvdst/coupling.hpp"
#include "wvdst/dst.hpp"
#include "wvdst/errors.hpp"
#include "wvdst/harness.hpp"
#include "wvdst/metrics.hpp"
#include "wvdst/parallel.hpp"
#include "wvdst/qmath.hpp"
#include "wvdst/rng.hpp"
#include "wvdst/sampler.hpp"

#endif  // WVDST_WVDST_HPP
