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

#include "opalg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace opalg {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

void allow_keys(const Json& j, const std::string& path, const std::set<std::string>& keys) {
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) fail(path.empty() ? k : path + "." + k, "unknown field");
  }
}

const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

long long require_int(const Json& j, const std::string& path, long long min_value) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  long long v = j.get<long long>();
  if (v < min_value) fail(path, "must be at least " + std::to_string(min_value));
  return v;
}

double require_positive(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) fail(path, "must be positive");
  return v;
}

std::string require_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

const CMat& resolve(const ProblemFile& p, const std::string& name, const std::string& path, Eigen::Index dim) {
  auto it = p.matrices.find(name);
  if (it == p.matrices.end()) fail(path, "unknown matrix '" + name + "'");
  if (it->second.rows() != dim) {
    fail(path, "matrix '" + name + "' is " + std::to_string(it->second.rows()) + "x" +
                   std::to_string(it->second.cols()) + ", expected " + std::to_string(dim) + "x" +
                   std::to_string(dim));
  }
  return it->second;
}

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

Json matrix_to_json(const CMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  CMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      fail(rp, "expected a row of " + std::to_string(n) + " entries (matrices are square)");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const Json& e = row[static_cast<std::size_t>(c)];
      const std::string ep = rp + "[" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        fail(ep, "expected a [re, im] pair");
      }
      m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
      if (!std::isfinite(m(i, c).real()) || !std::isfinite(m(i, c).imag())) fail(ep, "entry is not finite");
    }
  }
  return m;
}

ProblemFile parse_problem(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string what = e.what();
    auto pos = what.find("syntax error");
    throw ParseError(location(text, e.byte) + ": " + (pos == std::string::npos ? what : what.substr(pos)));
  }
  require_object(root, "<root>");
  allow_keys(root, "", {"description", "ambient", "matrices", "declarations", "maps", "seed", "tolerances", "args"});

  ProblemFile p;
  if (root.contains("description")) p.description = require_string(root["description"], "description");

  if (!root.contains("ambient")) fail("ambient", "missing");
  const Json& amb = require_object(root["ambient"], "ambient");
  allow_keys(amb, "ambient", {"dim", "blocks", "weights"});
  if (amb.contains("dim") == amb.contains("blocks")) fail("ambient", "give exactly one of 'dim' or 'blocks'");
  if (amb.contains("dim")) {
    p.ambient.dim = static_cast<Eigen::Index>(require_int(amb["dim"], "ambient.dim", 1));
    if (amb.contains("weights")) fail("ambient.weights", "weights require 'blocks'");
  } else {
    const Json& blocks = amb["blocks"];
    if (!blocks.is_array() || blocks.empty()) fail("ambient.blocks", "expected a non-empty array");
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      int n = static_cast<int>(require_int(blocks[k], "ambient.blocks[" + std::to_string(k) + "]", 1));
      p.ambient.blocks.push_back(n);
      p.ambient.dim += n;
    }
    if (amb.contains("weights")) {
      const Json& w = amb["weights"];
      if (!w.is_array() || w.size() != blocks.size()) fail("ambient.weights", "expected one weight per block");
      double total = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        p.ambient.weights.push_back(require_positive(w[k], "ambient.weights[" + std::to_string(k) + "]"));
        total += p.ambient.weights.back();
      }
      if (std::abs(total - 1.0) > 1e-9) fail("ambient.weights", "weights must sum to 1");
    }
  }
  const Eigen::Index d = p.ambient.dim;

  if (root.contains("matrices")) {
    for (const auto& [name, m] : require_object(root["matrices"], "matrices").items()) {
      p.matrices[name] = matrix_from_json(m, "matrices." + name);
    }
  }

  if (root.contains("declarations")) {
    for (const auto& [name, decl] : require_object(root["declarations"], "declarations").items()) {
      const std::string path = "declarations." + name;
      require_object(decl, path);
      allow_keys(decl, path, {"mode", "generators"});
      Declaration out;
      if (decl.contains("mode")) {
        std::string mode = require_string(decl["mode"], path + ".mode");
        try {
          out.mode = gen_mode_from_string(mode);
        } catch (const InvalidInput& e) {
          fail(path + ".mode", e.what());
        }
      }
      if (!decl.contains("generators") || !decl["generators"].is_array()) {
        fail(path + ".generators", "expected an array of matrix names");
      }
      for (std::size_t i = 0; i < decl["generators"].size(); ++i) {
        const std::string gp = path + ".generators[" + std::to_string(i) + "]";
        std::string g = require_string(decl["generators"][i], gp);
        resolve(p, g, gp, d);
        out.generators.push_back(g);
      }
      p.declarations[name] = std::move(out);
    }
  }

  if (root.contains("maps")) {
    for (const auto& [name, spec] : require_object(root["maps"], "maps").items()) {
      const std::string path = "maps." + name;
      require_object(spec, path);
      allow_keys(spec, path, {"codomain_dim", "pairs"});
      MapSpec out;
      if (!spec.contains("codomain_dim")) fail(path + ".codomain_dim", "missing");
      out.codomain_dim = static_cast<Eigen::Index>(require_int(spec["codomain_dim"], path + ".codomain_dim", 1));
      if (!spec.contains("pairs") || !spec["pairs"].is_array() || spec["pairs"].empty()) {
        fail(path + ".pairs", "expected a non-empty array of [input, image] name pairs");
      }
      for (std::size_t i = 0; i < spec["pairs"].size(); ++i) {
        const Json& pr = spec["pairs"][i];
        const std::string pp = path + ".pairs[" + std::to_string(i) + "]";
        if (!pr.is_array() || pr.size() != 2) fail(pp, "expected an [input, image] pair");
        std::string in = require_string(pr[0], pp + "[0]");
        std::string img = require_string(pr[1], pp + "[1]");
        resolve(p, in, pp + "[0]", d);
        resolve(p, img, pp + "[1]", out.codomain_dim);
        out.pairs.emplace_back(in, img);
      }
      p.maps[name] = std::move(out);
    }
  }

  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    p.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("tolerances")) {
    const Json& t = require_object(root["tolerances"], "tolerances");
    allow_keys(t, "tolerances", {"rank_tol", "cert_tol", "iter_cap"});
    if (t.contains("rank_tol")) p.tol.rank_tol = require_positive(t["rank_tol"], "tolerances.rank_tol");
    if (t.contains("cert_tol")) p.tol.cert_tol = require_positive(t["cert_tol"], "tolerances.cert_tol");
    if (t.contains("iter_cap")) p.tol.iter_cap = static_cast<int>(require_int(t["iter_cap"], "tolerances.iter_cap", 1));
  }
  if (root.contains("args")) p.args = require_object(root["args"], "args");
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problem(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + e.what());
  }
}

Json problem_to_json(const ProblemFile& p) {
  Json j;
  if (!p.description.empty()) j["description"] = p.description;
  if (p.ambient.blocks.empty()) {
    j["ambient"] = {{"dim", p.ambient.dim}};
  } else {
    j["ambient"] = {{"blocks", p.ambient.blocks}};
    if (!p.ambient.weights.empty()) j["ambient"]["weights"] = p.ambient.weights;
  }
  j["matrices"] = Json::object();
  for (const auto& [name, m] : p.matrices) j["matrices"][name] = matrix_to_json(m);
  j["declarations"] = Json::object();
  for (const auto& [name, d] : p.declarations) {
    j["declarations"][name] = {{"mode", to_string(d.mode)}, {"generators", d.generators}};
  }
  j["maps"] = Json::object();
  for (const auto& [name, m] : p.maps) {
    Json pairs = Json::array();
    for (const auto& [in, out] : m.pairs) pairs.push_back({in, out});
    j["maps"][name] = {{"codomain_dim", m.codomain_dim}, {"pairs", pairs}};
  }
  j["seed"] = p.seed;
  j["tolerances"] = {{"rank_tol", p.tol.rank_tol}, {"cert_tol", p.tol.cert_tol}, {"iter_cap", p.tol.iter_cap}};
  j["args"] = p.args;
  return j;
}

std::string problem_digest(const ProblemFile& p) {
  const std::string canon = problem_to_json(p).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json certificate_to_json(const Certificate& c, bool embed) {
  Json j = {{"verdict", to_string(c.verdict)},
            {"witness_kind", to_string(c.witness_kind)},
            {"level", c.level},
            {"residual", c.residual},
            {"iterations", c.iterations},
            {"subject", c.subject},
            {"note", c.note}};
  if (embed) {
    Json w = Json::array();
    for (const auto& m : c.witness) w.push_back(matrix_to_json(m));
    j["witness"] = w;
    if (c.object.size() > 0) j["object"] = matrix_to_json(c.object);
  }
  return j;
}

Subspace build_declaration(const ProblemFile& p, const std::string& name) {
  auto it = p.declarations.find(name);
  if (it == p.declarations.end()) throw InvalidInput("args: unknown declaration '" + name + "'");
  GeneratorSet g;
  g.ambient_dim = p.ambient.dim;
  g.mode = it->second.mode;
  for (const auto& gen : it->second.generators) g.generators.push_back(p.matrices.at(gen));
  return generate(g, p.tol);
}

Subspace build_ambient(const ProblemFile& p) {
  if (p.ambient.blocks.empty()) return full_algebra(p.ambient.dim);
  return block_diagonal_algebra(p.ambient.blocks);
}

SubspaceMap build_map(const ProblemFile& p, const std::string& name) {
  auto it = p.maps.find(name);
  if (it == p.maps.end()) throw InvalidInput("args: unknown map '" + name + "'");
  std::vector<CMat> in, out;
  for (const auto& [a, b] : it->second.pairs) {
    in.push_back(p.matrices.at(a));
    out.push_back(p.matrices.at(b));
  }
  return SubspaceMap::from_pairs(in, out, p.ambient.dim, it->second.codomain_dim, p.tol);
}

}  // namespace opalg
