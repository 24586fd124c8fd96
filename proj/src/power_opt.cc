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

#include "nbnoma/power_opt.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#if NBNOMA_HAVE_QUADMATH
#include <quadmath.h>
#endif

#include "nbnoma/random.h"
#include "nbnoma/units.h"

namespace nbnoma {
namespace {

#if NBNOMA_HAVE_QUADMATH
using Wide = __float128;
Wide WideLog1p(Wide x) { return log1pq(x); }
#else
using Wide = long double;
Wide WideLog1p(Wide x) { return std::log1p(x); }
#endif

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kCenteringTolerance = 1e-10;  // Newton decrement^2 / 2
constexpr double kRelativeGap = 1e-9;
constexpr double kMinMargin = 1e-12;

// The transformed problem scaled so that P_max = 1. Constraints are rows of
// A z <= b over the full vector z = (z_0, ..., z_{n-1}); z_0 is pinned to 1.
struct Normalized {
  int n = 0;
  std::vector<double> lambda;  // lambda * P_max
  Mat a;
  Vec b;
};

Normalized Normalize(const OrderedCluster& cluster) {
  Normalized p;
  p.n = cluster.size();
  const int n = p.n;
  p.lambda.resize(n);
  for (int j = 0; j < n; ++j) {
    p.lambda[j] = cluster.lambdas[j] * cluster.total_budget;
  }
  const LinearizedRates lin = LinearizeRates(cluster);
  const int rows = 2 * n;  // (n-1) rate + 1 last-rate + (n-1) order + 1 sign
  p.a = Mat::Zero(rows, n);
  p.b = Vec::Zero(rows);
  int r = 0;
  for (int j = 0; j + 1 < n; ++j, ++r) {
    p.a(r, j + 1) = 1.0;
    p.a(r, j) = -lin.delta[j];
    p.b(r) = -lin.rho[j] / cluster.total_budget;
  }
  p.a(r, n - 1) = -1.0;
  p.b(r) = -lin.theta / cluster.total_budget;
  ++r;
  for (int j = 0; j + 1 < n; ++j, ++r) {
    p.a(r, j) = -1.0;
    p.a(r, j + 1) = 2.0;
    if (j + 2 < n) p.a(r, j + 2) = -1.0;
  }
  p.a(r, n - 1) = -1.0;
  return p;
}

// Natural-log objective over the free coordinates x = (z_1..z_{n-1}); the
// pinned Phi_0 term is constant and left out.
double FreeObjective(const Normalized& p, const Vec& x) {
  double f = 0.0;
  for (int j = 1; j < p.n; ++j) {
    const double z = x(j - 1);
    f += std::log1p(p.lambda[j] * z) - std::log1p(p.lambda[j - 1] * z);
  }
  return f;
}

void FreeDerivatives(const Normalized& p, const Vec& x, Vec& grad, Mat& hess) {
  const int m = p.n - 1;
  grad = Vec::Zero(m);
  hess = Mat::Zero(m, m);
  for (int j = 1; j < p.n; ++j) {
    const double z = x(j - 1);
    const double lj = p.lambda[j], lp = p.lambda[j - 1];
    grad(j - 1) = lj / (1.0 + lj * z) - lp / (1.0 + lp * z);
    hess(j - 1, j - 1) = PhiCurvature(lp, lj, z);
  }
}

struct ConcaveObjective {
  std::function<double(const Vec&)> value;
  std::function<void(const Vec&, Vec&, Mat&)> derivatives;
};

// One Newton centering run of the barrier problem
//   minimize -t f(y) - sum log(b - A y).
// Returns false if the iteration budget runs out.
bool Center(Vec& y, double t, const ConcaveObjective& f, const Mat& a,
            const Vec& b, int& iterations) {
  auto merit = [&](const Vec& point, bool& inside) {
    const Vec slack = b - a * point;
    inside = (slack.array() > 0.0).all();
    if (!inside) return std::numeric_limits<double>::infinity();
    return -t * f.value(point) - slack.array().log().sum();
  };
  Vec g;
  Mat h;
  while (true) {
    if (iterations >= kSolverIterationCap) return false;
    ++iterations;
    const Vec slack = b - a * y;
    const Vec inv = slack.cwiseInverse();
    f.derivatives(y, g, h);
    const Vec grad = -t * g + a.transpose() * inv;
    const Mat hess =
        -t * h + a.transpose() * inv.cwiseAbs2().asDiagonal() * a;
    const Vec step = hess.ldlt().solve(-grad);
    const double decrement2 = -grad.dot(step);
    if (!(decrement2 > 2.0 * kCenteringTolerance)) return true;

    const Vec direction = a * step;
    double alpha = 1.0;
    for (int i = 0; i < direction.size(); ++i) {
      if (direction(i) > 0.0) {
        alpha = std::min(alpha, 0.99 * slack(i) / direction(i));
      }
    }
    bool inside = true;
    const double current = merit(y, inside);
    const double slope = grad.dot(step);
    while (true) {
      const Vec candidate = y + alpha * step;
      const double next = merit(candidate, inside);
      if (inside && next <= current + 0.25 * alpha * slope) {
        if (!(next < current)) return true;  // converged to rounding level
        y = candidate;
        break;
      }
      alpha *= 0.5;
      if (alpha < 1e-18) return true;  // no further progress possible
    }
  }
}

struct PhaseOne {
  Vec x;
  double margin = 0.0;
  bool capped = false;
};

// Maximizes the minimum slack s over the free coordinates.
PhaseOne MaximizeMargin(const Normalized& p, int& iterations) {
  const int m = p.n - 1;
  const int rows = static_cast<int>(p.b.size());
  // Free-coordinate form: A_x x <= b - A(:,0) * 1.
  const Mat ax = p.a.rightCols(m);
  const Vec bx = p.b - p.a.col(0);

  Mat a(rows + 1, m + 1);
  a.setZero();
  a.topLeftCorner(rows, m) = ax;
  a.block(0, m, rows, 1).setOnes();
  a(rows, m) = 1.0;  // s <= 1
  Vec b(rows + 1);
  b.head(rows) = bx;
  b(rows) = 1.0;

  Vec y(m + 1);
  for (int j = 1; j < p.n; ++j) {
    y(j - 1) = static_cast<double>(p.n - j) / p.n;  // equal powers
  }
  y(m) = 0.0;
  y(m) = std::min(0.0, (bx - ax * y.head(m)).minCoeff()) - 1.0;

  ConcaveObjective objective{
      [m](const Vec& v) { return v(m); },
      [m](const Vec& v, Vec& g, Mat& h) {
        g = Vec::Zero(v.size());
        g(m) = 1.0;
        h = Mat::Zero(v.size(), v.size());
        (void)m;
      }};
  PhaseOne out;
  for (double t = 1.0;; t *= 10.0) {
    if (!Center(y, t, objective, a, b, iterations)) {
      out.capped = true;
      break;
    }
    if ((rows + 1) / t < 1e-14) break;
  }
  out.x = y.head(m);
  out.margin = y(m);
  return out;
}

std::vector<double> ToWatts(const Vec& x, double budget) {
  std::vector<double> z(x.size() + 1);
  z[0] = budget;
  for (int j = 0; j < x.size(); ++j) z[j + 1] = x(j) * budget;
  return z;
}

// Coordinates whose objective term vanishes (equal consecutive gains) are
// moved to their lower bound with the others held fixed.
void PushTiedToLowerBound(const Normalized& p, Vec& x) {
  const int m = p.n - 1;
  const Mat ax = p.a.rightCols(m);
  const Vec bx = p.b - p.a.col(0);
  for (int j = 1; j < p.n; ++j) {
    if (p.lambda[j] != p.lambda[j - 1]) continue;
    const int col = j - 1;
    double lower = 0.0;
    bool bounded = false;
    for (int r = 0; r < ax.rows(); ++r) {
      const double coef = ax(r, col);
      if (coef >= 0.0) continue;
      const double rest = ax.row(r).dot(x) - coef * x(col);
      const double bound = (bx(r) - rest) / coef;
      lower = bounded ? std::max(lower, bound) : bound;
      bounded = true;
    }
    if (bounded && lower < x(col)) x(col) = lower;
  }
}

}  // namespace

void ValidateCluster(const OrderedCluster& c) {
  auto fail = [](const std::string& what) {
    throw NomaError(ErrorCode::kInvalidConfig, what);
  };
  if (c.lambdas.empty()) fail("cluster has no users");
  if (c.thresholds.size() != c.lambdas.size()) {
    fail("need one threshold per user");
  }
  for (size_t j = 0; j < c.lambdas.size(); ++j) {
    if (!(c.lambdas[j] > 0.0) || !std::isfinite(c.lambdas[j])) {
      fail("normalized gains must be positive");
    }
    if (j > 0 && c.lambdas[j] < c.lambdas[j - 1]) {
      fail("normalized gains must be sorted ascending");
    }
    if (!(c.thresholds[j] >= 0.0) || !std::isfinite(c.thresholds[j])) {
      fail("rate thresholds must be non-negative");
    }
  }
  if (!(c.total_budget > 0.0) || !std::isfinite(c.total_budget)) {
    fail("total budget must be positive");
  }
  if (!(c.bandwidth_factor > 0.0) || !std::isfinite(c.bandwidth_factor)) {
    fail("bandwidth factor must be positive");
  }
}

std::vector<double> ToZ(std::span<const double> powers) {
  std::vector<double> z(powers.size());
  double suffix = 0.0;
  for (size_t j = powers.size(); j-- > 0;) {
    suffix += powers[j];
    z[j] = suffix;
  }
  return z;
}

std::vector<double> FromZ(std::span<const double> z) {
  std::vector<double> p(z.size());
  for (size_t j = 0; j < z.size(); ++j) {
    const double next = j + 1 < z.size() ? z[j + 1] : 0.0;
    if (z[j] < next) {
      std::ostringstream msg;
      msg << "Z increases at index " << j;
      throw NomaError(ErrorCode::kNonmonotoneInput, msg.str());
    }
    p[j] = z[j] - next;
  }
  return p;
}

double Phi(int j, double z_j, const OrderedCluster& cluster) {
  const double b = cluster.bandwidth_factor;
  const double own = Log2OnePlus(cluster.lambdas[j] * z_j);
  if (j == 0) return b * own;
  return b * (own - Log2OnePlus(cluster.lambdas[j - 1] * z_j));
}

double PhiObjective(std::span<const double> z, const OrderedCluster& cluster) {
  double total = 0.0;
  for (size_t j = 0; j < z.size(); ++j) {
    total += Phi(static_cast<int>(j), z[j], cluster);
  }
  return total;
}

double PhiCurvature(double lambda_prev, double lambda_j, double z) {
  const double num = (lambda_prev - lambda_j) *
                     (lambda_prev + lambda_j + 2.0 * z * lambda_j * lambda_prev);
  const double dj = 1.0 + lambda_j * z;
  const double dp = 1.0 + lambda_prev * z;
  return num / (dj * dj * dp * dp);
}

LinearizedRates LinearizeRates(const OrderedCluster& cluster) {
  const int n = cluster.size();
  const double b = cluster.bandwidth_factor;
  LinearizedRates lin;
  lin.delta.resize(n);
  lin.rho.resize(n);
  for (int j = 0; j < n; ++j) {
    lin.delta[j] = std::exp2(-cluster.thresholds[j] / b);
    lin.rho[j] = -std::expm1(-cluster.thresholds[j] / b * std::numbers::ln2) /
                 cluster.lambdas[j];
  }
  lin.theta = std::expm1(cluster.thresholds[n - 1] / b * std::numbers::ln2) /
              cluster.lambdas[n - 1];
  return lin;
}

bool SatisfiesConstraints(std::span<const double> z,
                          const OrderedCluster& cluster, double tol) {
  const Normalized p = Normalize(cluster);
  if (static_cast<int>(z.size()) != p.n) return false;
  if (std::abs(z[0] - cluster.total_budget) > tol * cluster.total_budget) {
    return false;
  }
  Vec zn(p.n);
  for (int j = 0; j < p.n; ++j) zn(j) = z[j] / cluster.total_budget;
  const Vec slack = p.b - p.a * zn;
  return (slack.array() >= -tol).all();
}

FeasibilityResult FeasibleRegionCheck(const OrderedCluster& cluster) {
  ValidateCluster(cluster);
  const Normalized p = Normalize(cluster);
  FeasibilityResult out;
  if (p.n == 1) {
    // Nothing to choose: Z_0 = P_max must meet the rate and sign rows.
    const Vec slack = p.b - p.a.col(0);
    out.margin = slack.minCoeff();
    out.feasible = out.margin >= 0.0;
    if (out.feasible) out.z = {cluster.total_budget};
    return out;
  }
  int iterations = 0;
  const PhaseOne phase = MaximizeMargin(p, iterations);
  out.margin = phase.margin;
  out.feasible = phase.margin > kMinMargin;
  if (out.feasible) out.z = ToWatts(phase.x, cluster.total_budget);
  return out;
}

PowerSolution Solve(const OrderedCluster& cluster) {
  ValidateCluster(cluster);
  const Normalized p = Normalize(cluster);
  const double scale = cluster.bandwidth_factor / std::numbers::ln2;
  const double phi0 = std::log1p(p.lambda[0]);  // nats, Z_0 = 1

  PowerSolution out;
  if (p.n == 1) {
    const FeasibilityResult check = FeasibleRegionCheck(cluster);
    if (!check.feasible) {
      throw NomaError(ErrorCode::kInfeasible, "single user cannot reach its rate");
    }
    out.z = {cluster.total_budget};
    out.powers = {cluster.total_budget};
    out.objective = scale * phi0;
    out.converged = true;
    return out;
  }

  int iterations = 0;
  const PhaseOne phase = MaximizeMargin(p, iterations);
  if (!(phase.margin > kMinMargin)) {
    std::ostringstream msg;
    msg << "no strictly feasible power allocation (margin " << phase.margin
        << ")";
    throw NomaError(ErrorCode::kInfeasible, msg.str());
  }

  const int m = p.n - 1;
  const Mat ax = p.a.rightCols(m);
  const Vec bx = p.b - p.a.col(0);
  ConcaveObjective objective{
      [&p](const Vec& x) { return FreeObjective(p, x); },
      [&p](const Vec& x, Vec& g, Mat& h) { FreeDerivatives(p, x, g, h); }};

  Vec x = phase.x;
  const double rows = static_cast<double>(bx.size());
  double t = 1.0;
  bool converged = false;
  while (true) {
    if (!Center(x, t, objective, ax, bx, iterations)) break;
    const double total = phi0 + FreeObjective(p, x);
    if (rows / t <= kRelativeGap * std::abs(total)) {
      converged = true;
      break;
    }
    t *= 10.0;
  }
  PushTiedToLowerBound(p, x);

  out.z = ToWatts(x, cluster.total_budget);
  out.powers = FromZ(out.z);
  out.objective = scale * (phi0 + FreeObjective(p, x));
  out.duality_gap = scale * rows / t;
  out.iterations = iterations;
  out.converged = converged;
  if (!converged) throw NonConvergenceError(out);
  return out;
}

namespace {

// Richardson-extrapolated central second difference of
// ln(1 + lambda_j Z) - ln(1 + lambda_prev Z). Once lambda Z is large the
// curvature is ~1/(lambda Z) smaller than either term's own, so the
// differences are taken in binary128 where available.
double FiniteDifferenceCurvature(double lambda_prev, double lambda_j,
                                 double z) {
  const Wide lp = lambda_prev, lj = lambda_j, z0 = z;
  auto g = [&](Wide x) { return WideLog1p(lj * x) - WideLog1p(lp * x); };
  auto second = [&](Wide h) {
    return (g(z0 + h) - 2 * g(z0) + g(z0 - h)) / (h * h);
  };
  const Wide h = z0 / 1000;
  return static_cast<double>((4 * second(h / 2) - second(h)) / 3);
}

}  // namespace

ConcavityReport ConcavityProbe(const OrderedCluster& cluster, int samples,
                               uint64_t seed) {
  ValidateCluster(cluster);
  ConcavityReport report;
  if (cluster.size() < 2) return report;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    ConcavitySample s;
    s.j = rng.UniformInt(1, cluster.size() - 1);
    s.z = cluster.total_budget * std::pow(10.0, rng.Uniform(-6.0, 0.0));
    s.lambda_prev = cluster.lambdas[s.j - 1];
    s.lambda_j = cluster.lambdas[s.j];
    s.closed_form = PhiCurvature(s.lambda_prev, s.lambda_j, s.z);

    s.finite_difference = FiniteDifferenceCurvature(s.lambda_prev, s.lambda_j,
                                                    s.z);

    const double scale =
        std::max(std::abs(s.closed_form), std::abs(s.finite_difference));
    const double rel =
        scale == 0.0 ? 0.0
                     : std::abs(s.closed_form - s.finite_difference) / scale;
    report.max_relative_disagreement =
        std::max(report.max_relative_disagreement, rel);
    const bool pos_cf = s.closed_form > 0.0;
    const bool pos_fd = s.finite_difference > 0.0;
    report.positive_closed_form += pos_cf;
    report.positive_finite_difference += pos_fd;
    if (pos_cf || pos_fd || rel > 1e-4) report.failures.push_back(s);
    ++report.samples;
  }
  return report;
}

}  // namespace nbnoma
