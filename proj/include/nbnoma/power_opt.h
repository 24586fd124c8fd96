// Copyright 2026 The nbnoma Authors
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

#ifndef NBNOMA_POWER_OPT_H_
#define NBNOMA_POWER_OPT_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nbnoma/error.h"

namespace nbnoma {

// One NOMA cluster's power-control subproblem. Users are indexed in ascending
// normalized gain, lambda[j] = |h_j|^2 / (N0 W); user j is decoded before
// every user after it. Indices in this module are 0-based.
struct OrderedCluster {
  std::vector<double> lambdas;     // 1/W, ascending, all > 0
  std::vector<double> thresholds;  // bps, all >= 0
  double total_budget = 1.0;       // W, shared by the cluster
  double bandwidth_factor = 1.0;   // Hz

  int size() const { return static_cast<int>(lambdas.size()); }
};

// Throws NomaError(kInvalidConfig) if the cluster breaks its invariants.
void ValidateCluster(const OrderedCluster& cluster);

// Suffix sums Z_j = sum_{l >= j} P_l.
std::vector<double> ToZ(std::span<const double> powers);

// P_j = Z_j - Z_{j+1}, P_last = Z_last. Throws kNonmonotoneInput if Z
// increases anywhere or ends below zero.
std::vector<double> FromZ(std::span<const double> z);

// Per-user term of the transformed objective:
//   j = 0:  B log2(1 + lambda_0 Z_0)
//   j > 0:  B [log2(1 + lambda_j Z_j) - log2(1 + lambda_{j-1} Z_j)]
double Phi(int j, double z_j, const OrderedCluster& cluster);

// sum_j Phi(j, Z_j).
double PhiObjective(std::span<const double> z, const OrderedCluster& cluster);

// Closed-form curvature of ln(1 + lambda_j Z) - ln(1 + lambda_prev Z):
//   (lambda_prev - lambda_j)(lambda_prev + lambda_j + 2 Z lambda_j lambda_prev)
//     / ((1 + lambda_j Z)^2 (1 + lambda_prev Z)^2)
// Phi_j'' is this times B / ln 2.
double PhiCurvature(double lambda_prev, double lambda_j, double z);

// Linear rate constraints in Z-space:
//   Z_{j+1} <= delta_j Z_j - rho_j  (j < n-1),   Z_{n-1} >= theta
// with delta_j = 2^(-R_j / B), rho_j = (1 - delta_j) / lambda_j and
// theta = (2^(R_{n-1} / B) - 1) / lambda_{n-1}.
struct LinearizedRates {
  std::vector<double> delta;
  std::vector<double> rho;
  double theta = 0.0;
};
LinearizedRates LinearizeRates(const OrderedCluster& cluster);

// True if Z (in W) meets every constraint of the transformed problem
// (budget Z_0 = P_max, linearized rates, power ordering P_0 >= ... >= 0) to
// within tol * P_max.
bool SatisfiesConstraints(std::span<const double> z,
                          const OrderedCluster& cluster, double tol);

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> z;  // witness in W when feasible
  // Largest achievable minimum constraint slack, in units of P_max. Positive
  // means the feasible set has an interior.
  double margin = 0.0;
};

// Decides whether the transformed problem has a strictly feasible point.
// Sets without interior (margin <= 1e-12) are reported infeasible.
FeasibilityResult FeasibleRegionCheck(const OrderedCluster& cluster);

struct PowerSolution {
  std::vector<double> powers;  // W, per ordered user, nonincreasing
  std::vector<double> z;       // W
  double objective = 0.0;      // bps, sum of Phi
  double duality_gap = 0.0;    // bps; bounds objective suboptimality
  int iterations = 0;          // Newton steps over both phases
  bool converged = false;
};

inline constexpr int kSolverIterationCap = 10000;

// Raised when the iteration cap is reached; carries the best iterate.
class NonConvergenceError : public NomaError {
 public:
  explicit NonConvergenceError(PowerSolution best)
      : NomaError(ErrorCode::kNonConvergence, "iteration cap reached"),
        best_(std::move(best)) {}
  const PowerSolution& best() const { return best_; }

 private:
  PowerSolution best_;
};

// Maximizes sum_j Phi_j(Z_j) over the transformed feasible set with a
// log-barrier interior-point method (Newton centering, barrier weight x10 per
// outer step) until the duality gap is below 1e-9 of the objective. Users
// whose gain equals their predecessor's contribute nothing to the objective;
// their Z is then pushed to its lower bound, i.e. power moves to earlier
// users.
//
// Throws kInfeasible if FeasibleRegionCheck fails, NonConvergenceError after
// kSolverIterationCap Newton steps.
PowerSolution Solve(const OrderedCluster& cluster);

struct ConcavitySample {
  int j = 0;
  double z = 0.0;
  double lambda_prev = 0.0;
  double lambda_j = 0.0;
  double closed_form = 0.0;
  double finite_difference = 0.0;
};

struct ConcavityReport {
  int samples = 0;
  int positive_closed_form = 0;
  int positive_finite_difference = 0;
  double max_relative_disagreement = 0.0;
  std::vector<ConcavitySample> failures;  // positive or disagreeing samples
};

// Samples `samples` points (j uniform over 1..n-1, Z log-uniform over
// [1e-6, 1] * P_max) and compares PhiCurvature with a Richardson-extrapolated
// central difference evaluated in binary128 (long double without
// libquadmath). A sample fails if
// either value is positive or they disagree by more than 1e-4 relative.
ConcavityReport ConcavityProbe(const OrderedCluster& cluster, int samples,
                               uint64_t seed = 1);

}  // namespace nbnoma

#endif  // NBNOMA_POWER_OPT_H_
