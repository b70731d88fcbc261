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

#include "chicat/chi_io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "chicat/errors.h"
#include "json.hpp"

namespace chicat {

namespace {

// nlohmann::json prints the shortest round-trip form; the chi payload is
// emitted by hand so every number carries 17 significant digits.
std::string number(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

std::string chi_to_json(const ProcessMatrix& p) {
  nlohmann::ordered_json header;
  header["format_version"] = kChiFormatVersion;
  header["D"] = p.dim();
  header["shape"] = p.basis().shape().dims();
  header["basis_kind"] = to_string(p.basis().kind());
  header["trace_preserving"] = p.trace_preserving();
  header["metadata"] = p.metadata();
  std::string out = header.dump(1);
  out.erase(out.rfind('}'));
  while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
  out += ",\n \"chi\": [";
  const auto entries = p.chi().entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k != 0) out += ',';
    out += k % p.chi().cols() == 0 ? "\n  [" : "[";
    out += number(entries[k].real());
    out += ',';
    out += number(entries[k].imag());
    out += ']';
  }
  out += "\n ]\n}\n";
  return out;
}

ProcessMatrix chi_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("chi document: {}", e.what()));
  }
  if (!doc.is_object() || !doc.contains("format_version")) {
    throw SchemaError("chi document: missing format_version");
  }
  if (!doc["format_version"].is_number_integer() || doc["format_version"].get<int>() != kChiFormatVersion) {
    throw SchemaError(fmt::format("chi document: format_version {} is not supported (expected {})",
                                  doc["format_version"].dump(), kChiFormatVersion));
  }
  try {
    const SubsystemShape shape(doc.at("shape").get<std::vector<std::size_t>>());
    const OperatorBasis basis(shape, basis_kind_from_string(doc.at("basis_kind").get<std::string>()));
    if (doc.at("D").get<std::size_t>() != basis.dim()) {
      throw std::invalid_argument("chi document: D does not match shape");
    }
    const auto& raw = doc.at("chi");
    if (!raw.is_array() || raw.size() != basis.size() * basis.size()) {
      throw std::invalid_argument("chi document: chi has the wrong number of entries");
    }
    std::vector<Complex> entries;
    entries.reserve(raw.size());
    for (const auto& z : raw) {
      if (!z.is_array() || z.size() != 2) throw std::invalid_argument("chi document: entries must be [re, im]");
      entries.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    Metadata metadata;
    if (doc.contains("metadata")) metadata = doc["metadata"].get<Metadata>();
    return ProcessMatrix(basis, ComplexMatrix(basis.size(), basis.size(), std::move(entries)), std::move(metadata));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("chi document: {}", e.what()));
  }
}

void save_chi(const ProcessMatrix& p, const std::string& path) { write_file_atomic(path, chi_to_json(p)); }

ProcessMatrix load_chi(const std::string& path) { return chi_from_json(read_file(path)); }

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot open {} for writing", tmp));
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write to {} failed", tmp));
  }
  std::filesystem::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace chicat
