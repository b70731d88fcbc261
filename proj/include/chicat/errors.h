// Copyright 2026 The chicat Authors
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

#ifndef CHICAT_ERRORS_H_
#define CHICAT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace chicat {

/// A matrix or register dimension exceeded the configured cap.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Propagation produced non-finite amplitudes or an inconsistent jump.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A serialized document carries an unsupported format version.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration document or flag could not be interpreted.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chicat

#endif  // CHICAT_ERRORS_H_
