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

#include <sstream>

#include <doctest.h>

#include "beamwave/conic.hpp"
#include "socp_synth.hpp"

using namespace beamwave;
using namespace beamwave::conic;

namespace
{

RVector unit(int n, int i)
{
    RVector v = RVector::Zero(n);
    v(i) = 1.0;
    return v;
}

} // namespace

TEST_CASE("a single linear bound is attained exactly")
{
    ConicProgram p(1);
    p.set_objective(unit(1, 0));
    p.add_linear(unit(1, 0), 3.0);
    p.add_linear(-unit(1, 0), 10.0); // keep the feasible set bounded below
    const ConicSolution sol = solve_conic(p);
    CHECK(sol.status == SolveStatus::kOptimal);
    CHECK(std::abs(sol.objective_value - 3.0) <= 1e-9);
    CHECK(std::abs(sol.x(0) - 3.0) <= 1e-9);
}

TEST_CASE("unconstrained least squares through the quadratic epigraph")
{
    // minimize ||x - c||^2 as: maximize -t, ||x - c||^2 - t <= 0.
    const int n = 4;
    RVector target(n);
    target << 1.5, -2.0, 0.25, 3.0;

    ConicProgram p(n + 1);
    p.set_objective(-unit(n + 1, n));
    RMatrix g = RMatrix::Zero(n, n + 1);
    g.leftCols(n).setIdentity();
    p.add_quadratic(g, -target, -unit(n + 1, n), 0.0);
    p.add_linear(unit(n + 1, n), 1e3); // bound t to keep the cone block tame

    const ConicSolution sol = solve_conic(p);
    CHECK(sol.status == SolveStatus::kOptimal);
    // Objective (the attained ||x - c||^2) collapses to zero ...
    CHECK(std::abs(sol.objective_value) <= 1e-9);
    // ... and the minimizer approaches the target.
    CHECK((sol.x.head(n) - target).norm() <= 1e-4);
}

TEST_CASE("synthesized SOCPs recover the constructed optimum")
{
    Substream rng = Substream::derived(70, {0});
    for (int trial = 0; trial < 60; ++trial)
    {
        const testsupport::SynthesizedSocp synth = testsupport::synthesize_socp(rng);
        const ConicSolution sol = solve_conic(synth.program);
        REQUIRE(sol.status == SolveStatus::kOptimal);
        CHECK(std::abs(sol.objective_value - synth.optimal_value) <=
              1e-6 * (1.0 + std::abs(synth.optimal_value)));
        CHECK(sol.primal_residual <= 1e-8);
        CHECK(sol.duality_gap <= 1e-7);
        // Returned point satisfies every constraint of the input program.
        CHECK(synth.program.max_violation(sol.x) <= 1e-8 * (1.0 + sol.x.norm()));
    }
}

TEST_CASE("solver output is deterministic")
{
    Substream rng = Substream::derived(71, {0});
    const testsupport::SynthesizedSocp synth = testsupport::synthesize_socp(rng);
    const ConicSolution a = solve_conic(synth.program);
    const ConicSolution b = solve_conic(synth.program);
    REQUIRE(a.status == SolveStatus::kOptimal);
    REQUIRE(b.status == SolveStatus::kOptimal);
    CHECK((a.x - b.x).lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK(a.objective_value == b.objective_value);
}

TEST_CASE("contradictory bounds are reported infeasible")
{
    ConicProgram p(1);
    p.set_objective(unit(1, 0));
    p.add_linear(unit(1, 0), -1.0);  //  x <= -1
    p.add_linear(-unit(1, 0), -1.0); // -x <= -1  (x >= 1)
    const ConicSolution sol = solve_conic(p);
    CHECK(sol.status == SolveStatus::kInfeasible);
}

TEST_CASE("an unbounded direction is reported")
{
    ConicProgram p(2);
    p.set_objective(unit(2, 0));
    p.add_linear(-unit(2, 0), 0.0); // x0 >= 0, objective unbounded above
    p.add_linear(unit(2, 1), 1.0);
    p.add_linear(-unit(2, 1), 1.0);
    const ConicSolution sol = solve_conic(p);
    CHECK(sol.status == SolveStatus::kUnbounded);
}

TEST_CASE("malformed programs are rejected")
{
    ConicProgram p(3);
    CHECK_THROWS_AS(p.set_objective(RVector::Zero(2)), std::invalid_argument);
    CHECK_THROWS_AS(p.add_linear(RVector::Zero(2), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(p.add_quadratic(RMatrix::Zero(2, 2), RVector::Zero(2), RVector::Zero(3), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(p.add_soc(RMatrix::Zero(2, 3), RVector::Zero(1), RVector::Zero(3), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_conic(p), std::invalid_argument); // no constraints
    CHECK_THROWS_AS(ConicProgram(0), std::invalid_argument);
}

TEST_CASE("a mixed LP/QP with an interior optimum is solved accurately")
{
    // maximize x0 + x1 s.t. x0^2 + x1^2 <= 2, x0 <= 1, x1 <= 1.
    ConicProgram p(2);
    RVector obj(2);
    obj << 1.0, 1.0;
    p.set_objective(obj);
    p.add_quadratic(RMatrix::Identity(2, 2), RVector::Zero(2), RVector::Zero(2), -2.0);
    p.add_linear(unit(2, 0), 1.0);
    p.add_linear(unit(2, 1), 1.0);
    const ConicSolution sol = solve_conic(p);
    CHECK(sol.status == SolveStatus::kOptimal);
    CHECK(std::abs(sol.objective_value - 2.0) <= 1e-8);
    CHECK(std::abs(sol.x(0) - 1.0) <= 1e-6);
    CHECK(std::abs(sol.x(1) - 1.0) <= 1e-6);
}

TEST_CASE("the debug dump names every block")
{
    ConicProgram p(2);
    p.set_objective(unit(2, 0));
    p.add_linear(unit(2, 1), 1.0);
    p.add_quadratic(RMatrix::Identity(2, 2), RVector::Zero(2), RVector::Zero(2), -1.0);
    p.add_soc(RMatrix::Identity(2, 2), RVector::Zero(2), unit(2, 0), 2.0);
    std::stringstream out;
    p.dump(out);
    const std::string text = out.str();
    CHECK(text.find("vars 2") != std::string::npos);
    CHECK(text.find("maximize") != std::string::npos);
    CHECK(text.find("linear") != std::string::npos);
    CHECK(text.find("quadratic") != std::string::npos);
    CHECK(text.find("soc") != std::string::npos);
}
