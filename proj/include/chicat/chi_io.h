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

#ifndef CHICAT_CHI_IO_H_
#define CHICAT_CHI_IO_H_

#include <string>

#include "chicat/process_matrix.h"

namespace chicat {

inline constexpr int kChiFormatVersion = 1;

/// JSON document: {format_version, D, shape, basis_kind, trace_preserving,
/// metadata, chi: [[re, im], ...] row-major}. Doubles are written with 17
/// significant digits so that load(save(x)) is bit-exact.
std::string chi_to_json(const ProcessMatrix& p);

/// Throws SchemaError on a format_version mismatch and std::invalid_argument
/// on malformed content.
ProcessMatrix chi_from_json(const std::string& text);

void save_chi(const ProcessMatrix& p, const std::string& path);
ProcessMatrix load_chi(const std::string& path);

/// Writes `contents` to a temporary sibling of `path`, then renames it.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace chicat

#endif  // CHICAT_CHI_IO_H_
