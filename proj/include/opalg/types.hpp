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

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace opalg {

using Complex = std::complex<double>;
/// Dense complex matrix; the carrier for every element of M_d.
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Numerical budget shared by all modules.
struct Tolerance {
  /// Singular-value cutoff, relative to the largest singular value.
  double rank_tol = 1e-9;
  /// Slack for PSD and equality checks.
  double cert_tol = 1e-8;
  /// Iteration cap for the feasibility solver.
  int iter_cap = 50'000;
};

/// Run-wide settings threaded through the certification routines.
struct Context {
  Tolerance tol;
  std::uint64_t seed = 0;
  /// Highest amplification level probed by the randomized falsifiers.
  int max_level = 3;
  /// Random samples per level in witness searches.
  int trials = 200;
  /// Force the greedy Shilov-ideal search even for small block counts.
  bool greedy = false;
};

using Rng = std::mt19937_64;

/// Derives an independent stream seed from a master seed and a tag, so the
/// random draws of one routine do not depend on call order elsewhere.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t master, const std::string& tag);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or contract-violating input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class NotStrictlyPositive : public DegenerateInput {
 public:
  using DegenerateInput::DegenerateInput;
};

/// A constructed object failed its own invariant verification.
class StructureFailure : public Error {
 public:
  using Error::Error;
};

/// No constructive factorization is known for the algebra.
class UnsupportedAlgebra : public Error {
 public:
  using Error::Error;
};

class RangeNotOnto : public Error {
 public:
  using Error::Error;
};

}  // namespace opalg
