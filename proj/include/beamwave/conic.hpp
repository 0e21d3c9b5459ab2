// SPDX-License-Identifier: Apache-2.0
//
// beamwave: beamforming and device scheduling for superimposed
// multicast-unicast transmissions in mmWave networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <iosfwd>
#include <vector>

#include "beamwave/types.hpp"

namespace beamwave::conic
{

/// a . x <= rhs
struct LinearConstraint
{
    RVector a;
    double rhs = 0.0;
};

/// ||G x + h||^2 + b . x + c <= 0, i.e. a convex quadratic with the curvature
/// supplied in factored form (Q = G^T G).
struct QuadraticConstraint
{
    RMatrix g;
    RVector h;
    RVector b;
    double c = 0.0;
};

/// Second-order-cone membership: ||G x + h||_2 <= a . x + d.
struct SocConstraint
{
    RMatrix g;
    RVector h;
    RVector a;
    double d = 0.0;
};

/// A small convex program over real variables: maximize a linear objective
/// subject to linear, convex-quadratic and second-order-cone constraints.
/// Complex model quantities are pre-lowered to interleaved real/imag pairs
/// by the caller.
class ConicProgram
{
  public:
    explicit ConicProgram(int num_vars);

    int num_vars() const { return num_vars_; }

    /// Objective to maximize.
    void set_objective(RVector c);
    const RVector &objective() const { return objective_; }

    void add_linear(RVector a, double rhs);
    void add_quadratic(RMatrix g, RVector h, RVector b, double c);
    void add_soc(RMatrix g, RVector h, RVector a, double d);

    const std::vector<LinearConstraint> &linear_constraints() const { return linear_; }
    const std::vector<QuadraticConstraint> &quadratic_constraints() const { return quadratics_; }
    const std::vector<SocConstraint> &soc_constraints() const { return socs_; }

    /// Largest constraint violation at x (positive when infeasible); used for
    /// external re-checks of solver output.
    double max_violation(const RVector &x) const;

    /// Plain-text dump (objective row then one constraint per block) for
    /// cross-checking against an external reference solver.
    void dump(std::ostream &os) const;

  private:
    int num_vars_;
    RVector objective_;
    std::vector<LinearConstraint> linear_;
    std::vector<QuadraticConstraint> quadratics_;
    std::vector<SocConstraint> socs_;
};

enum class SolveStatus
{
    kOptimal,
    kInfeasible,
    kUnbounded,
    kIterationLimit,
};

const char *to_string(SolveStatus status);

struct ConicSolution
{
    RVector x;
    double objective_value = 0.0;
    SolveStatus status = SolveStatus::kIterationLimit;
    double primal_residual = 0.0; ///< ||Ax + s - b|| / (1 + ||b||) of the conic lowering
    double dual_residual = 0.0;   ///< ||A^T z + c|| / (1 + ||c||)
    double duality_gap = 0.0;     ///< |primal - dual| / (1 + |primal|)
    int iterations = 0;
};

/// Solves the program with a homogeneous self-dual primal-dual interior-point
/// method (Nesterov-Todd scaling, Mehrotra predictor-corrector) over the
/// nonnegative-orthant/second-order-cone lowering of the constraints.
/// Deterministic: fixed initialization, no randomized pivoting.
ConicSolution solve_conic(const ConicProgram &program, double tol = 1e-9);

} // namespace beamwave::conic
