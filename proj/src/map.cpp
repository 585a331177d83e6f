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

#include "opalg/map.hpp"

#include "opalg/linalg.hpp"

namespace opalg {

CMat SubspaceMap::apply(const CMat& x) const {
  CVec c = domain.coordinates(x);
  CMat out = CMat::Zero(codomain_dim, codomain_dim);
  for (Eigen::Index i = 0; i < c.size(); ++i) out += c(i) * images[static_cast<std::size_t>(i)];
  return out;
}

SubspaceMap SubspaceMap::from_function(const Subspace& domain, Eigen::Index codomain_dim,
                                       const std::function<CMat(const CMat&)>& f) {
  SubspaceMap m;
  m.domain = domain;
  m.codomain_dim = codomain_dim;
  for (const auto& b : domain.basis()) {
    CMat img = f(b);
    if (img.rows() != codomain_dim || img.cols() != codomain_dim) {
      throw InvalidInput("map image has the wrong shape");
    }
    m.images.push_back(std::move(img));
  }
  const Eigen::Index d = domain.ambient_dim();
  if (domain.dim() > 0 && contains(domain, CMat::Identity(d, d))) {
    m.unital = (m.apply(CMat::Identity(d, d)) - CMat::Identity(codomain_dim, codomain_dim)).norm() <=
               1e-8 * std::sqrt(static_cast<double>(codomain_dim));
  }
  return m;
}

SubspaceMap SubspaceMap::from_pairs(const std::vector<CMat>& inputs, const std::vector<CMat>& outputs,
                                    Eigen::Index ambient_dim, Eigen::Index codomain_dim,
                                    const Tolerance& tol) {
  if (inputs.size() != outputs.size()) throw InvalidInput("map pairs: input/output count mismatch");
  Subspace dom = span_of(inputs, ambient_dim, tol);
  if (dom.dim() != static_cast<Eigen::Index>(inputs.size())) {
    throw InvalidInput("map pairs: inputs are linearly dependent");
  }
  for (const auto& o : outputs) {
    if (o.rows() != codomain_dim || o.cols() != codomain_dim) {
      throw InvalidInput("map pairs: output shape does not match codomain");
    }
  }
  // Express each basis element of dom in terms of the inputs.
  const auto k = static_cast<Eigen::Index>(inputs.size());
  CMat coeff(k, k);  // coeff(i, j) = <input_j, basis_i>
  for (Eigen::Index j = 0; j < k; ++j) coeff.col(j) = dom.coordinates(inputs[static_cast<std::size_t>(j)]);
  CMat inv = coeff.inverse();
  SubspaceMap m;
  m.domain = dom;
  m.codomain_dim = codomain_dim;
  for (Eigen::Index i = 0; i < k; ++i) {
    CMat img = CMat::Zero(codomain_dim, codomain_dim);
    for (Eigen::Index j = 0; j < k; ++j) img += inv(j, i) * outputs[static_cast<std::size_t>(j)];
    m.images.push_back(img);
  }
  if (contains(dom, CMat::Identity(ambient_dim, ambient_dim), tol)) {
    m.unital = (m.apply(CMat::Identity(ambient_dim, ambient_dim)) -
                CMat::Identity(codomain_dim, codomain_dim))
                   .norm() <= tol.cert_tol * std::sqrt(static_cast<double>(codomain_dim));
  }
  return m;
}

Subspace SubspaceMap::range(const Tolerance& tol) const { return span_of(images, codomain_dim, tol); }

CMat SubspaceMap::matrix() const {
  CMat m(codomain_dim * codomain_dim, static_cast<Eigen::Index>(images.size()));
  for (std::size_t i = 0; i < images.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectorize(images[i]);
  return m;
}

SubspaceMap compose(const SubspaceMap& g, const SubspaceMap& f) {
  SubspaceMap out;
  out.domain = f.domain;
  out.codomain_dim = g.codomain_dim;
  for (const auto& img : f.images) out.images.push_back(g.apply(img));
  out.unital = f.unital && g.unital;
  return out;
}

SubspaceMap sandwich(const CMat& u, const SubspaceMap& f, const CMat& v) {
  SubspaceMap out;
  out.domain = f.domain;
  out.codomain_dim = u.rows();
  for (const auto& img : f.images) out.images.push_back(u * img * v);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return "CERTIFIED";
    case Verdict::Refuted:
      return "REFUTED";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::None:
      return "none";
    case WitnessKind::Kernel:
      return "kernel";
    case WitnessKind::LevelNorm:
      return "level_norm";
    case WitnessKind::Positivity:
      return "positivity";
    case WitnessKind::Separating:
      return "separating";
    case WitnessKind::Other:
      return "other";
  }
  return "none";
}

Certificate Certificate::make(Verdict v, std::string note) {
  Certificate c;
  c.verdict = v;
  c.note = std::move(note);
  return c;
}

CMat assemble_level(const std::vector<CMat>& blocks, int k) {
  if (k <= 0 || blocks.size() != static_cast<std::size_t>(k * k)) {
    throw InvalidInput("assemble_level: expected k*k blocks");
  }
  std::vector<std::vector<CMat>> grid(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) grid[static_cast<std::size_t>(i)].push_back(blocks[static_cast<std::size_t>(i * k + j)]);
  }
  return amplify(grid);
}

}  // namespace opalg
