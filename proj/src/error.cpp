// Copyright 2026 The adiabopt Authors
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

#include "adiabopt/error.hpp"

namespace adiabopt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NegativeRate: return "NegativeRate";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::BadLabel: return "BadLabel";
    case ErrorKind::NonFiniteUpdate: return "NonFiniteUpdate";
    case ErrorKind::DegenerateDraw: return "DegenerateDraw";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace adiabopt
