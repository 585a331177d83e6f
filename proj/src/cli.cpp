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

#include "opalg/cli.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <sstream>

#include "opalg/envelope.hpp"
#include "opalg/expectation.hpp"
#include "opalg/isometry.hpp"
#include "opalg/linalg.hpp"
#include "opalg/logmod.hpp"
#include "opalg/positivity.hpp"
#include "opalg/structure.hpp"

namespace opalg {

namespace {

Json blocks_json(const BlockStructure& bs) {
  Json out = Json::array();
  for (int k = 0; k < bs.num_blocks; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    out.push_back({{"dim", bs.block_dims[ks]}, {"multiplicity", bs.multiplicities[ks]}});
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "}";
}

class Runner {
 public:
  Runner(const ProblemFile& p, const RunOptions& o) : p_(p), o_(o) {
    ctx_.tol = p.tol;
    if (o.cert_tol) ctx_.tol.cert_tol = *o.cert_tol;
    if (o.iter_cap) ctx_.tol.iter_cap = *o.iter_cap;
    ctx_.seed = o.seed.value_or(p.seed);
    if (o.levels) {
      if (*o.levels < 1) throw InvalidInput("--levels must be at least 1");
      ctx_.max_level = *o.levels;
    }
    if (o.greedy) ctx_.greedy = *o.greedy;
  }

  RunResult go(const std::string& command) {
    static const std::map<std::string, void (Runner::*)()> table = {
        {"generate", &Runner::generate_cmd},
        {"wedderburn", &Runner::wedderburn_cmd},
        {"envelope", &Runner::envelope_cmd},
        {"triple-envelope", &Runner::triple_envelope_cmd},
        {"check-isometry", &Runner::check_isometry_cmd},
        {"analyze-isometry", &Runner::analyze_isometry_cmd},
        {"block-form", &Runner::block_form_cmd},
        {"factorize", &Runner::factorize_cmd},
        {"classify-ladder", &Runner::classify_ladder_cmd},
        {"condexp", &Runner::condexp_cmd},
        {"classify-tracial", &Runner::classify_tracial_cmd},
        {"l1-check", &Runner::l1_check_cmd},
        {"density-scan", &Runner::density_scan_cmd},
    };
    auto it = table.find(command);
    if (it == table.end()) throw InvalidInput("unknown command '" + command + "'");
    const std::string digest = problem_digest(p_);
    text_ << "opalg " << command << "  input " << digest << "  seed " << ctx_.seed << "\n";
    auto start = std::chrono::steady_clock::now();
    (this->*(it->second))();
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    RunResult r;
    std::vector<Verdict> vs;
    for (const auto& v : verdict_list_) vs.push_back(v);
    r.exit_code = exit_code_for(vs);
    r.report = {{"format", "opalg-report/1"},
                {"command", command},
                {"input_digest", digest},
                {"settings",
                 {{"seed", ctx_.seed},
                  {"rank_tol", ctx_.tol.rank_tol},
                  {"cert_tol", ctx_.tol.cert_tol},
                  {"iter_cap", ctx_.tol.iter_cap},
                  {"max_level", ctx_.max_level},
                  {"trials", ctx_.trials},
                  {"greedy", ctx_.greedy}}},
                {"result", result_},
                {"verdicts", verdicts_},
                {"exit_code", r.exit_code}};
    if (o_.timing) r.report["wall_time"] = wall;
    for (const auto& v : verdicts_) {
      text_ << "  " << v["name"].get<std::string>() << ": " << v["verdict"].get<std::string>();
      if (v["residual"].get<double>() != 0.0) text_ << "  (residual " << v["residual"].get<double>() << ")";
      text_ << "\n";
    }
    text_ << "exit " << r.exit_code << "  wall " << wall << " s\n";
    r.text = text_.str();
    return r;
  }

 private:
  // Name of the object an argument refers to; falls back to the only
  // candidate when the file defines exactly one.
  template <typename Map>
  std::string pick(const char* key, const Map& pool, const char* kind) const {
    if (p_.args.contains(key)) {
      if (!p_.args[key].is_string()) throw InvalidInput(std::string("args.") + key + ": expected a name");
      return p_.args[key].template get<std::string>();
    }
    if (pool.size() == 1) return pool.begin()->first;
    throw InvalidInput(std::string("args.") + key + ": missing, and the file does not define exactly one " + kind);
  }

  std::string algebra_name() const { return pick("algebra", p_.declarations, "declaration"); }
  Subspace algebra() const { return build_declaration(p_, algebra_name()); }
  SubspaceMap map() const { return build_map(p_, pick("map", p_.maps, "map")); }

  const CMat& matrix_arg(const char* key) const {
    if (!p_.args.contains(key) || !p_.args[key].is_string()) {
      throw InvalidInput(std::string("args.") + key + ": expected a matrix name");
    }
    auto name = p_.args[key].get<std::string>();
    auto it = p_.matrices.find(name);
    if (it == p_.matrices.end()) throw InvalidInput(std::string("args.") + key + ": unknown matrix '" + name + "'");
    return it->second;
  }

  // The superalgebra B or M: a named declaration, else the ambient algebra.
  Subspace superalgebra() const {
    if (p_.args.contains("superalgebra")) {
      if (!p_.args["superalgebra"].is_string()) throw InvalidInput("args.superalgebra: expected a name");
      return build_declaration(p_, p_.args["superalgebra"].get<std::string>());
    }
    return build_ambient(p_);
  }

  TraceState trace_on(const Subspace& m) const {
    BlockStructure bs = wedderburn(m, ctx_);
    if (!p_.args.contains("superalgebra") && !p_.ambient.weights.empty()) {
      return TraceState::from_block_masses(bs, p_.ambient.weights);
    }
    return TraceState::normalized_trace(bs);
  }

  int arg_int(const char* key, int fallback) const {
    if (!p_.args.contains(key)) return fallback;
    if (!p_.args[key].is_number_integer()) throw InvalidInput(std::string("args.") + key + ": expected an integer");
    return p_.args[key].get<int>();
  }

  void verdict(const std::string& name, const Certificate& c) {
    verdicts_.push_back({{"name", name}, {"verdict", to_string(c.verdict)}, {"residual", c.residual}});
    verdict_list_.push_back(c.verdict);
    certificates_[name] = certificate_to_json(c, o_.embed);
    result_["certificates"] = certificates_;
  }

  Json flags_json(const Subspace& s) const {
    bool unital = check_unital(s, ctx_.tol);
    bool sa = check_selfadjoint(s, ctx_.tol);
    bool alg = check_algebra(s, ctx_.tol);
    return {{"unital", unital},
            {"selfadjoint", sa},
            {"algebra", alg},
            {"star_algebra", sa && alg},
            {"triple_system", s.flags.triple_system || (sa && alg)}};
  }

  Json basis_json(const Subspace& s) const {
    Json b = Json::array();
    for (const auto& x : s.basis()) b.push_back(matrix_to_json(x));
    return b;
  }

  void generate_cmd() {
    std::vector<std::string> names;
    if (p_.args.contains("algebra")) {
      names.push_back(algebra_name());
    } else {
      for (const auto& [n, d] : p_.declarations) names.push_back(n);
    }
    if (names.empty()) throw InvalidInput("generate: the file has no declarations");
    result_["algebras"] = Json::object();
    for (const auto& n : names) {
      Subspace s = build_declaration(p_, n);
      Json j = {{"mode", to_string(p_.declarations.at(n).mode)}, {"dim", s.dim()}, {"flags", flags_json(s)}};
      if (o_.embed) j["basis"] = basis_json(s);
      result_["algebras"][n] = j;
      text_ << "  " << n << ": dim " << s.dim() << "\n";
    }
  }

  void wedderburn_cmd() {
    Subspace s = algebra();
    if (!check_unital(s, ctx_.tol) || !check_selfadjoint(s, ctx_.tol) || !check_algebra(s, ctx_.tol)) {
      throw InvalidInput("wedderburn: '" + algebra_name() + "' is not a unital *-algebra (use mode star_algebra)");
    }
    BlockStructure bs = wedderburn(s, ctx_);
    double res = bs.verify(s);
    result_["dim"] = s.dim();
    result_["blocks"] = blocks_json(bs);
    result_["residual"] = res;
    if (o_.embed) {
      Json cp = Json::array();
      for (const auto& p : bs.central_projections) cp.push_back(matrix_to_json(p));
      result_["central_projections"] = cp;
    }
    for (int k = 0; k < bs.num_blocks; ++k) {
      text_ << "  block " << k << ": M_" << bs.block_dims[static_cast<std::size_t>(k)] << " x "
            << bs.multiplicities[static_cast<std::size_t>(k)] << "\n";
    }
    Certificate c = Certificate::make(res <= ctx_.tol.cert_tol ? Verdict::Certified : Verdict::Refuted,
                                      "block structure invariants");
    c.residual = res;
    verdict("structure", c);
  }

  void envelope_json(const EnvelopeResult& e) {
    result_["generated_dim"] = e.generated_algebra.dim();
    result_["blocks"] = blocks_json(e.structure);
    result_["shilov_blocks"] = e.shilov_blocks;
    result_["envelope_blocks"] = e.envelope_blocks;
    result_["envelope_dims"] = e.envelope_dims;
    result_["greedy"] = e.greedy;
    result_["via_corner"] = e.via_corner;
    result_["has_unit"] = e.has_unit;
    Json log = Json::array();
    for (const auto& s : e.log) {
      log.push_back({{"blocks", s.blocks}, {"verdict", to_string(s.cert.verdict)}, {"pruned", s.pruned}});
    }
    result_["search_log"] = log;
  }

  void run_envelope(const std::function<EnvelopeResult()>& f) {
    try {
      EnvelopeResult e = f();
      envelope_json(e);
      text_ << "  envelope blocks " << join(e.envelope_dims) << ", Shilov ideal blocks " << join(e.shilov_blocks)
            << "\n";
      verdict("envelope", Certificate::make(Verdict::Certified, "Shilov ideal search complete"));
    } catch (const EnvelopeInconclusive& ex) {
      envelope_json(ex.partial());
      verdict("envelope", Certificate::make(Verdict::Inconclusive, ex.what()));
    }
  }

  void envelope_cmd() {
    Subspace a = algebra();
    run_envelope([&] { return cstar_envelope(a, ctx_); });
  }

  void triple_envelope_cmd() {
    Subspace x = algebra();
    run_envelope([&] { return triple_envelope(x, ctx_); });
  }

  void check_isometry_cmd() {
    SubspaceMap t = map();
    Certificate c = complete_isometry(t, ctx_);
    result_["domain_dim"] = t.domain.dim();
    result_["codomain_dim"] = t.codomain_dim;
    if (c.refuted()) result_["witness_violation"] = witness_violation(t, c, ctx_.tol);
    text_ << "  witness: " << to_string(c.witness_kind) << (c.level ? " at level " + std::to_string(c.level) : "")
          << "\n";
    verdict("complete_isometry", c);
  }

  Json analysis_json(const IsometryAnalysis& a) const {
    Json j = {{"ideal_blocks", a.ideal_blocks},
              {"ideal_dim", a.ideal_dim},
              {"rank_p", static_cast<long>(std::lround(a.p.trace().real()))},
              {"rank_q", static_cast<long>(std::lround(a.q.trace().real()))},
              {"flags", {{"shilov", a.flags.shilov}, {"left_type1", a.flags.left_type1},
                         {"right_type1", a.flags.right_type1}}},
              {"partial_isometry_residual", a.partial_isometry_residual},
              {"support_residual", a.support_residual},
              {"factor_residual", a.factor_residual},
              {"multiplicative_residual", a.multiplicative_residual},
              {"star_identity_residual", a.star_identity_residual}};
    if (o_.embed) {
      j["p"] = matrix_to_json(a.p);
      j["q"] = matrix_to_json(a.q);
      j["u"] = matrix_to_json(a.u);
    }
    return j;
  }

  void analyze_isometry_cmd() {
    SubspaceMap t = map();
    IsometryAnalysis a = analyze(t, ctx_);
    if (a.verdict.certified()) {
      result_["analysis"] = analysis_json(a);
      Type1Report t1 = type1_consequences(t, a, ctx_);
      Json tj = {{"applicable", t1.applicable}, {"t1_invertible", t1.t1_invertible}, {"notes", t1.notes}};
      if (t1.commuting_identity) tj["commuting_identity"] = *t1.commuting_identity;
      if (t1.factor_residual) tj["factor_residual"] = *t1.factor_residual;
      if (t1.coisometry_residual) tj["coisometry_residual"] = *t1.coisometry_residual;
      if (t1.homomorphism_residual) tj["homomorphism_residual"] = *t1.homomorphism_residual;
      if (t1.bound_k) tj["bound_k"] = *t1.bound_k;
      result_["type1"] = tj;
      text_ << "  ideal dim " << a.ideal_dim << ", left type 1 " << a.flags.left_type1 << ", right type 1 "
            << a.flags.right_type1 << "\n";
    }
    verdict("complete_isometry", a.verdict);
  }

  void block_form_cmd() {
    SubspaceMap t = map();
    const Eigen::Index n = t.domain.ambient_dim();
    if (!same_subspace(t.domain, upper_triangular(n), ctx_.tol)) {
      throw InvalidInput("block-form: the map's domain is not the upper triangular algebra");
    }
    IsometryAnalysis a = analyze(t, ctx_);
    verdict("complete_isometry", a.verdict);
    if (!a.verdict.certified() || !a.block_form) return;
    const BlockForm& b = *a.block_form;
    result_["residual"] = b.residual;
    result_["s_codomain_dim"] = b.s.codomain_dim;
    if (o_.embed) {
      result_["u"] = matrix_to_json(b.u);
      result_["v"] = matrix_to_json(b.v);
      Json s = Json::array();
      for (const auto& img : b.s.images) s.push_back(matrix_to_json(img));
      result_["s_images"] = s;
    }
    Certificate c = Certificate::make(b.residual <= ctx_.tol.cert_tol ? Verdict::Certified : Verdict::Refuted,
                                      "T(a) = U diag(a, S(a)) V on the basis");
    c.residual = b.residual;
    verdict("block_form", c);
  }

  void factorize_cmd() {
    Subspace a = algebra();
    if (p_.args.contains("matrix")) {
      const CMat& b = matrix_arg("matrix");
      try {
        Factorization f = factorize_in(build_ambient(p_), a, b, ctx_);
        result_["a"] = matrix_to_json(f.a);
        result_["residual"] = f.residual;
        result_["membership"] = f.membership;
        result_["inverse_membership"] = f.inverse_membership;
        double worst = std::max({f.residual, f.membership, f.inverse_membership});
        Certificate c = Certificate::make(worst <= ctx_.tol.cert_tol ? Verdict::Certified : Verdict::Refuted,
                                          "b = a* a with a, a^-1 in A");
        c.residual = worst;
        verdict("factorization", c);
      } catch (const UnsupportedAlgebra& e) {
        verdict("factorization", Certificate::make(Verdict::Inconclusive, e.what()));
      }
    }
    if (p_.args.contains("forms")) {
      const CMat& b = matrix_arg("forms");
      try {
        FactorForms f = factor_forms(a, b, ctx_.tol);
        result_["forms"] = {{"polar_u", matrix_to_json(f.polar_u)},
                            {"u", matrix_to_json(f.u)},
                            {"a", matrix_to_json(f.a)},
                            {"modulus_residual", f.modulus_residual},
                            {"product_residual", f.product_residual}};
        double worst = std::max(f.modulus_residual, f.product_residual);
        Certificate c = Certificate::make(worst <= ctx_.tol.cert_tol ? Verdict::Certified : Verdict::Refuted,
                                          "b = u |a| and b = u a");
        c.residual = worst;
        verdict("factor_forms", c);
      } catch (const UnsupportedAlgebra& e) {
        verdict("factor_forms", Certificate::make(Verdict::Inconclusive, e.what()));
      }
    }
    if (verdicts_.empty()) throw InvalidInput("factorize: give args.matrix and/or args.forms");
  }

  void classify_ladder_cmd() {
    LadderReport r = classify_ladder(algebra(), superalgebra(), ctx_);
    result_["factor_samples"] = r.factor_samples;
    result_["worst_factor_residual"] = r.worst_factor_residual;
    result_["cone_samples"] = r.cone_samples;
    if (r.envelope_full) result_["envelope_full"] = *r.envelope_full;
    result_["notes"] = r.notes;
    verdict("dirichlet", r.dirichlet);
    verdict("factorization", r.factorization);
    verdict("logmodular", r.logmodular);
    verdict("logrigged", r.logrigged);
    verdict("conv_approx_left", r.conv_approx_left);
    verdict("conv_approx_right", r.conv_approx_right);
  }

  void condexp_cmd() {
    Subspace m = superalgebra();
    ExpectationResult r = cond_exp(m, trace_on(m), algebra(), ctx_);
    result_["diagonal_dim"] = r.diagonal.dim();
    result_["idempotence_residual"] = r.idempotence_residual;
    result_["unital_residual"] = r.unital_residual;
    result_["bimodule_residual"] = r.bimodule_residual;
    result_["trace_preservation_residual"] = r.trace_preservation_residual;
    result_["orthogonality_residual"] = r.orthogonality_residual;
    result_["positivity_residual"] = r.positivity_residual;
    result_["gram_condition"] = r.gram_condition;
    if (p_.args.contains("matrix")) result_["phi_of_matrix"] = matrix_to_json(r.phi.apply(matrix_arg("matrix")));
    if (o_.embed) result_["diagonal_basis"] = basis_json(r.diagonal);
    text_ << "  diagonal dim " << r.diagonal.dim() << ", Gram condition " << r.gram_condition << "\n";
    verdict("multiplicative_on_A", r.multiplicative_on_a);
  }

  void classify_tracial_cmd() {
    Subspace m = superalgebra();
    TracialReport r = classify_tracial(m, trace_on(m), algebra(), ctx_);
    result_["span_dim"] = r.span_dim;
    result_["m_dim"] = r.m_dim;
    result_["diagonal_dim"] = r.expectation.diagonal.dim();
    result_["envelope_dims"] = r.envelope_dims;
    result_["factor_samples"] = r.factor_samples;
    result_["worst_factor_residual"] = r.worst_factor_residual;
    result_["notes"] = r.notes;
    verdict("tracial", r.tracial);
    verdict("dense", r.dense);
    verdict("subdiagonal", r.subdiagonal);
    if (r.envelope_is_m) verdict("envelope_is_M", *r.envelope_is_m);
    if (r.factorization) verdict("factorization", *r.factorization);
  }

  void l1_check_cmd() {
    DensityReport r = l1_density_check(superalgebra(), algebra(), ctx_);
    result_["span_dim"] = r.span_dim;
    result_["m_dim"] = r.m_dim;
    result_["central_by_block"] = r.central_by_block;
    result_["diagonal_central"] = r.diagonal_central;
    result_["logrigged"] = to_string(r.logrigged.verdict);
    result_["hypotheses_met"] = r.hypotheses_met;
    result_["notes"] = r.notes;
    verdict("dense", r.dense);
  }

  void density_scan_cmd() {
    const int d = arg_int("dim", static_cast<int>(p_.ambient.dim));
    const int samples = arg_int("samples", 20);
    auto rows = density_scan(d, samples, ctx_);
    Json out = Json::array();
    int counts[2][2] = {{0, 0}, {0, 0}};
    for (const auto& r : rows) {
      Json units = Json::array();
      for (const auto& [i, j] : r.units) units.push_back({i, j});
      out.push_back({{"units", units}, {"dim", r.dim}, {"tracial", r.tracial}, {"dense", r.dense}});
      ++counts[r.tracial ? 1 : 0][r.dense ? 1 : 0];
    }
    result_["rows"] = out;
    result_["table"] = {{"tracial_dense", counts[1][1]},
                        {"tracial_not_dense", counts[1][0]},
                        {"not_tracial_dense", counts[0][1]},
                        {"not_tracial_not_dense", counts[0][0]}};
    text_ << "  tracial+dense " << counts[1][1] << ", tracial only " << counts[1][0] << ", dense only "
          << counts[0][1] << ", neither " << counts[0][0] << "\n";
  }

  const ProblemFile& p_;
  const RunOptions& o_;
  Context ctx_;
  Json result_ = Json::object();
  Json verdicts_ = Json::array();
  Json certificates_ = Json::object();
  std::vector<Verdict> verdict_list_;
  std::ostringstream text_;
};

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "generate",         "wedderburn", "envelope", "triple-envelope",  "check-isometry",
      "analyze-isometry", "block-form", "factorize", "classify-ladder", "condexp",
      "classify-tracial", "l1-check",   "density-scan"};
  return names;
}

int exit_code_for(const std::vector<Verdict>& verdicts) {
  bool inconclusive = false;
  for (Verdict v : verdicts) {
    if (v == Verdict::Refuted) return 2;
    if (v == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? 3 : 0;
}

RunResult run(const std::string& command, const ProblemFile& problem, const RunOptions& options) {
  Runner r(problem, options);
  return r.go(command);
}

}  // namespace opalg
