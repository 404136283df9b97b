// Copyright 2026 The Kinfeas Authors
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

#ifndef KINFEAS_ERROR_HPP_
#define KINFEAS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace kinfeas {

// A caller broke a precondition (bad dimensions, out-of-limit input,
// stepping a finished episode).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A configuration document is malformed or inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing an artifact failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kinfeas

#endif  // KINFEAS_ERROR_HPP_
