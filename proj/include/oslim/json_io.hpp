/*
 * Copyright 2026 The oslim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef OSLIM_JSON_IO_HPP
#define OSLIM_JSON_IO_HPP

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "oslim/inductive_limit.hpp"
#include "oslim/nuclearity.hpp"
#include "oslim/tensor.hpp"
#include "oslim/uhf.hpp"

namespace oslim {

// Wire formats (field names are normative):
//   Matrix      {"rows": n, "cols": m, "re": [...], "im": [...]}  row-major
//   System      {"ambient_dim": d, "name": str, "basis": [Matrix...]}
//               full matrix algebras may write {"full_algebra": true} and
//               omit the basis
//   Map         {"domain": systemRef, "codomain": systemRef,
//                "images": [Matrix...]}  systemRef = name or inline System
//   Certificate {"alpha": Matrix, "P": Matrix, "Q": Matrix,
//                "l": int, "m": int, "epsilon": real}
//   Sequence    {"kind": "explicit", "systems": [...], "connect": [...]}
//               or {"kind": "uhf", "gamma": [ints], "depth": int}
// Parse failures raise InvalidArgument naming the offending field path.

namespace jsonio {

using nlohmann::json;

inline const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(errc::invalid_argument, path + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) fail(errc::invalid_argument, path + "." + key + " is missing");
  return *it;
}

inline std::size_t size_field(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(errc::invalid_argument, path + "." + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

inline double real_field(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number()) fail(errc::invalid_argument, path + "." + key + " must be a number");
  return v.get<double>();
}

inline std::string string_field(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) fail(errc::invalid_argument, path + "." + key + " must be a string");
  return v.get<std::string>();
}

inline std::vector<double> real_array_field(const json& j, const char* key,
                                            const std::string& path, std::size_t expect) {
  const json& v = field(j, key, path);
  if (!v.is_array())
    fail(errc::invalid_argument, path + "." + key + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      fail(errc::invalid_argument,
           path + "." + key + "[" + std::to_string(i) + "] must be a number");
    out.push_back(v[i].get<double>());
  }
  if (out.size() != expect)
    fail(errc::invalid_argument, path + "." + key + " must hold " + std::to_string(expect) +
                                     " entries, got " + std::to_string(out.size()));
  return out;
}

inline json matrix_to_json(const ComplexMatrix& m) {
  std::vector<double> re, im;
  re.reserve(m.rows() * m.cols());
  im.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& path = "matrix") {
  const std::size_t rows = size_field(j, "rows", path);
  const std::size_t cols = size_field(j, "cols", path);
  if (rows == 0 || cols == 0) fail(errc::invalid_argument, path + " must be non-empty");
  const auto re = real_array_field(j, "re", path, rows * cols);
  const auto im = real_array_field(j, "im", path, rows * cols);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c)
      m(i, c) = complexd(re[i * cols + c], im[i * cols + c]);
  return m;
}

inline json system_to_json(const ConcreteOperatorSystem& s) {
  json j{{"ambient_dim", s.ambient_dim()}, {"name", s.name()}};
  if (s.is_full_algebra()) {
    j["full_algebra"] = true;
  } else {
    json basis = json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) basis.push_back(matrix_to_json(s.basis_element(i)));
    j["basis"] = basis;
  }
  return j;
}

inline ConcreteOperatorSystem system_from_json(const json& j, const std::string& path = "system",
                                               Tolerance tol = {}) {
  const std::size_t d = size_field(j, "ambient_dim", path);
  const std::string name = string_field(j, "name", path);
  if (j.value("full_algebra", false)) return ConcreteOperatorSystem::full_matrix_algebra(d, name);
  const json& basis = field(j, "basis", path);
  if (!basis.is_array() || basis.empty())
    fail(errc::invalid_argument, path + ".basis must be a non-empty array");
  std::vector<ComplexMatrix> mats;
  mats.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    mats.push_back(matrix_from_json(basis[i], path + ".basis[" + std::to_string(i) + "]"));
  return ConcreteOperatorSystem::from_basis(d, std::move(mats), name, tol);
}

/// Named systems resolvable from map files ("systemRef" values).
using SystemRegistry = std::map<std::string, ConcreteOperatorSystem>;

/// Accepts either {"systems": [System...]} or a bare array.
inline SystemRegistry registry_from_json(const json& j, const std::string& path = "systems",
                                         Tolerance tol = {}) {
  const json* arr = &j;
  if (j.is_object()) arr = &field(j, "systems", path);
  if (!arr->is_array()) fail(errc::invalid_argument, path + " must be an array of systems");
  SystemRegistry reg;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    ConcreteOperatorSystem s = system_from_json((*arr)[i], p, tol);
    if (!reg.emplace(s.name(), s).second)
      fail(errc::invalid_argument, p + " duplicates the system name " + s.name());
  }
  return reg;
}

/// A systemRef is a registered name or an inline System object.
inline ConcreteOperatorSystem resolve_system(const json& ref, const SystemRegistry& reg,
                                             const std::string& path, Tolerance tol = {}) {
  if (ref.is_string()) {
    auto it = reg.find(ref.get<std::string>());
    if (it == reg.end())
      fail(errc::invalid_argument, path + " names the unknown system " + ref.get<std::string>());
    return it->second;
  }
  return system_from_json(ref, path, tol);
}

inline json map_to_json(const LinearMap& f) {
  json images = json::array();
  for (std::size_t i = 0; i < f.domain().dim(); ++i) images.push_back(matrix_to_json(f.image(i)));
  return json{{"domain", f.domain().name()},
              {"codomain", f.codomain().name()},
              {"images", images}};
}

inline LinearMap map_from_json(const json& j, const SystemRegistry& reg,
                               const std::string& path = "map", Tolerance tol = {}) {
  ConcreteOperatorSystem dom = resolve_system(field(j, "domain", path), reg, path + ".domain", tol);
  ConcreteOperatorSystem cod =
      resolve_system(field(j, "codomain", path), reg, path + ".codomain", tol);
  const json& images = field(j, "images", path);
  if (!images.is_array()) fail(errc::invalid_argument, path + ".images must be an array");
  std::vector<ComplexMatrix> mats;
  mats.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i)
    mats.push_back(matrix_from_json(images[i], path + ".images[" + std::to_string(i) + "]"));
  return LinearMap::from_images(std::move(dom), std::move(cod), std::move(mats), tol);
}

inline json certificate_to_json(const MaxCertificate& c) {
  return json{{"alpha", matrix_to_json(c.alpha)}, {"P", matrix_to_json(c.P)},
              {"Q", matrix_to_json(c.Q)},         {"l", c.l},
              {"m", c.m},                         {"epsilon", c.epsilon}};
}

inline MaxCertificate certificate_from_json(const json& j, const std::string& path = "certificate") {
  MaxCertificate c;
  c.alpha = matrix_from_json(field(j, "alpha", path), path + ".alpha");
  c.P = matrix_from_json(field(j, "P", path), path + ".P");
  c.Q = matrix_from_json(field(j, "Q", path), path + ".Q");
  c.l = size_field(j, "l", path);
  c.m = size_field(j, "m", path);
  c.epsilon = real_field(j, "epsilon", path);
  if (c.l == 0 || c.m == 0) fail(errc::invalid_argument, path + ".l and .m must be positive");
  if (c.P.rows() % c.l != 0 || c.Q.rows() % c.m != 0 || c.alpha.cols() != c.l * c.m)
    fail(errc::invalid_argument, path + " factor shapes disagree with l and m");
  return c;
}

inline std::vector<std::size_t> gamma_from_json(const json& j, const char* key,
                                                const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_array() || v.empty())
    fail(errc::invalid_argument, path + "." + key + " must be a non-empty array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer() || v[i].get<long long>() < 1)
      fail(errc::invalid_argument,
           path + "." + key + "[" + std::to_string(i) + "] must be a positive integer");
    out.push_back(v[i].get<std::size_t>());
  }
  return out;
}

inline InductiveSequence sequence_from_json(const json& j, SequenceOptions opts = {},
                                            const std::string& path = "sequence",
                                            Tolerance tol = {}) {
  const std::string kind = string_field(j, "kind", path);
  if (kind == "uhf") {
    GammaRule rule(gamma_from_json(j, "gamma", path));
    const std::size_t depth = j.contains("depth") ? size_field(j, "depth", path) : opts.depth;
    return uhf_sequence(rule, depth, opts);
  }
  if (kind == "explicit") {
    const json& systems = field(j, "systems", path);
    if (!systems.is_array() || systems.empty())
      fail(errc::invalid_argument, path + ".systems must be a non-empty array");
    std::vector<ConcreteOperatorSystem> stages;
    SystemRegistry reg;
    for (std::size_t i = 0; i < systems.size(); ++i) {
      const std::string p = path + ".systems[" + std::to_string(i) + "]";
      stages.push_back(system_from_json(systems[i], p, tol));
      reg.emplace(stages.back().name(), stages.back());
    }
    const json& connect = field(j, "connect", path);
    if (!connect.is_array())
      fail(errc::invalid_argument, path + ".connect must be an array of maps");
    std::vector<LinearMap> maps;
    for (std::size_t i = 0; i < connect.size(); ++i)
      maps.push_back(
          map_from_json(connect[i], reg, path + ".connect[" + std::to_string(i) + "]", tol));
    const bool inclusion = j.value("inclusion", false);
    return InductiveSequence::from_stages(std::move(stages), std::move(maps), opts, inclusion,
                                          j.value("name", std::string("sequence")));
  }
  fail(errc::invalid_argument, path + ".kind must be \"explicit\" or \"uhf\"");
}

inline json limit_element_to_json(const LimitElement& e) {
  return json{{"stage", e.stage}, {"level", e.level}, {"matrix", matrix_to_json(e.rep)}};
}

inline LimitElement limit_element_from_json(const json& j, const std::string& path = "element") {
  LimitElement e;
  e.stage = size_field(j, "stage", path);
  e.level = size_field(j, "level", path);
  e.rep = matrix_from_json(field(j, "matrix", path), path + ".matrix");
  if (e.stage == 0 || e.level == 0)
    fail(errc::invalid_argument, path + " stage and level must be positive");
  return e;
}

inline json verdict_to_json(const ConeVerdict& v) {
  json j{{"status", cone_status_name(v.status)}, {"detail", v.detail}};
  j["witness"] = v.witness ? json(*v.witness) : json(nullptr);
  return j;
}

inline json verdict_to_json(const CpVerdict& v) {
  json j{{"status", cp_status_name(v.status)},
         {"unital", v.unital},
         {"exact", v.exact},
         {"checked_level", v.checked_level}};
  if (v.witness) {
    j["witness"] = json{{"element", matrix_to_json(v.witness->element)},
                        {"level", v.witness->level},
                        {"element_min_eig", v.witness->element_min_eig},
                        {"image_min_eig", v.witness->image_min_eig},
                        {"direction", v.witness->direction}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline json verdict_to_json(const LimitVerdict& v) {
  return json{{"status", limit_status_name(v.status)},
              {"stage_used", v.stage_used},
              {"epsilon_used", v.epsilon_used},
              {"detail", v.detail}};
}

inline json report_to_json(const NuclearityReport& r) {
  return json{{"pair", json::array({r.alpha, r.beta})},
              {"level", r.level},
              {"samples", r.samples},
              {"forward_pass", r.forward_pass},
              {"backward_found", r.backward_found},
              {"unknowns", r.unknowns},
              {"seed", r.seed}};
}

inline json report_to_json(const UhfMonoReport& r) {
  return json{{"stages", r.stages},
              {"level_max", r.level_max},
              {"samples_per_cell", r.samples_per_cell},
              {"checked", r.checked},
              {"discrepancies", r.discrepancies},
              {"skipped", r.skipped},
              {"passed", r.passed()}};
}

/// Canonical text form: sorted keys (nlohmann object order), two-space
/// indent, one trailing newline. Reports hashed or diffed byte-for-byte rely
/// on this.
inline std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

inline json load_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) fail(errc::invalid_argument, "cannot open " + file);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(errc::invalid_argument, file + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& file, const json& j) {
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(errc::invalid_argument, "cannot open " + file + " for writing");
  out << dump_canonical(j);
}

}  // namespace jsonio
}  // namespace oslim

#endif  // OSLIM_JSON_IO_HPP
