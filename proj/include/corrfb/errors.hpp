// Copyright 2026 The corrfb Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace corrfb {

/// Malformed arguments: bad probabilities, length mismatches, unnormalized tables.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request exceeds a configured enumeration or dense-matrix cap.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Two independent evaluation routes disagreed beyond tolerance.
class ConsistencyFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace corrfb
