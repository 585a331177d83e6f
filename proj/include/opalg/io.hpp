// Copyright 2026 The opalg Authors
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

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "opalg/map.hpp"
#include "opalg/subspace.hpp"

namespace opalg {

using Json = nlohmann::json;

/// Malformed problem file. The message starts with a line:column location
/// for syntax errors or a field path such as `matrices.E12[1][0]`.
class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// M_d, or ⊕_k M_{n_k} placed block-diagonally with block masses τ(p_k).
struct Ambient {
  Eigen::Index dim = 0;
  std::vector<int> blocks;
  std::vector<double> weights;
};

struct Declaration {
  GenMode mode = GenMode::Algebra;
  std::vector<std::string> generators;
};

struct MapSpec {
  Eigen::Index codomain_dim = 0;
  /// (input, image) matrix names.
  std::vector<std::pair<std::string, std::string>> pairs;
};

struct ProblemFile {
  std::string description;
  Ambient ambient;
  std::map<std::string, CMat> matrices;
  std::map<std::string, Declaration> declarations;
  std::map<std::string, MapSpec> maps;
  std::uint64_t seed = 0;
  Tolerance tol;
  /// Names and parameters read by the commands ("algebra", "map", ...).
  Json args = Json::object();
};

/// Parses and validates a problem file. Throws ParseError.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

/// Canonical JSON form; parse_problem(problem_to_json(p).dump()) == p.
Json problem_to_json(const ProblemFile& p);

/// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string problem_digest(const ProblemFile& p);

/// Rows of [re, im] pairs.
Json matrix_to_json(const CMat& m);
CMat matrix_from_json(const Json& j, const std::string& path);

Json certificate_to_json(const Certificate& c, bool embed);

/// The subspace generated by a declaration.
Subspace build_declaration(const ProblemFile& p, const std::string& name);
/// The ambient *-algebra M.
Subspace build_ambient(const ProblemFile& p);
SubspaceMap build_map(const ProblemFile& p, const std::string& name);

}  // namespace opalg
