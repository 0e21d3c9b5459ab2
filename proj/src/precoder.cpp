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
//
// Precoders only enter the program through the inner products g_k^H b and
// through their norms, so any component orthogonal to span{g_1..g_K} is pure
// power loss and the optimum lies in the span. All subproblems are therefore
// assembled over an orthonormal basis of that span, which keeps the conic
// programs small regardless of the antenna count.

#include "beamwave/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "beamwave/conic.hpp"
#include "beamwave/errors.hpp"

namespace beamwave::precoder
{

std::vector<EffectiveChannel> effective_channels(const std::vector<channel::ChannelMatrix> &channels,
                                                 const std::vector<combiner::Combiner> &combiners)
{
    if (channels.size() != combiners.size())
    {
        throw std::invalid_argument("effective_channels: channel and combiner counts differ");
    }
    std::vector<EffectiveChannel> out;
    out.reserve(channels.size());
    for (std::size_t i = 0; i < channels.size(); ++i)
    {
        if (combiners[i].w.size() != channels[i].entries.rows())
        {
            throw std::invalid_argument("effective_channels: combiner length mismatch");
        }
        EffectiveChannel ec;
        ec.g = channels[i].entries.adjoint() * combiners[i].w;
        ec.w_norm2 = combiners[i].w.squaredNorm();
        out.push_back(std::move(ec));
    }
    return out;
}

std::vector<CVector> zero_forcing_directions(const std::vector<EffectiveChannel> &g_scheduled)
{
    const int kp = static_cast<int>(g_scheduled.size());
    if (kp == 0)
    {
        throw std::invalid_argument("zero_forcing_directions: empty schedule");
    }
    const int n_tx = static_cast<int>(g_scheduled.front().g.size());
    if (kp > n_tx)
    {
        throw std::invalid_argument("zero_forcing_directions: more devices than antennas");
    }
    CMatrix stack(kp, n_tx); // row k is g_k^H
    for (int i = 0; i < kp; ++i)
    {
        if (g_scheduled[static_cast<std::size_t>(i)].g.size() != n_tx)
        {
            throw std::invalid_argument("zero_forcing_directions: inconsistent dimensions");
        }
        stack.row(i) = g_scheduled[static_cast<std::size_t>(i)].g.adjoint();
    }
    Eigen::JacobiSVD<CMatrix> svd(stack, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    if (sv(kp - 1) <= 1e-10 * sv(0))
    {
        throw SingularConfigurationError(
            "zero_forcing_directions: effective channel stack is rank deficient");
    }
    // Pseudo-inverse columns null every cross link: stack * pinv = I.
    const CMatrix pinv =
        svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    std::vector<CVector> directions(static_cast<std::size_t>(kp));
    for (int i = 0; i < kp; ++i)
    {
        directions[static_cast<std::size_t>(i)] = pinv.col(i).normalized();
    }
    return directions;
}

CVector aggregate_multicast_direction(const std::vector<EffectiveChannel> &g_all)
{
    if (g_all.empty())
    {
        throw std::invalid_argument("aggregate_multicast_direction: no devices");
    }
    const int n_tx = static_cast<int>(g_all.front().g.size());
    CMatrix gram = CMatrix::Zero(n_tx, n_tx);
    for (const EffectiveChannel &ec : g_all)
    {
        gram.noalias() += ec.g * ec.g.adjoint();
    }
    if (gram.norm() == 0.0)
    {
        throw SingularConfigurationError("aggregate_multicast_direction: all effective channels zero");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    CVector v = es.eigenvectors().col(n_tx - 1);
    int i_max = 0;
    double best = std::abs(v(0));
    for (int i = 1; i < n_tx; ++i)
    {
        if (std::abs(v(i)) > best)
        {
            best = std::abs(v(i));
            i_max = i;
        }
    }
    v *= std::conj(v(i_max)) / best;
    v.normalize();
    return v;
}

namespace
{

double full_power_multicast_snr(const std::vector<EffectiveChannel> &g_all, const CVector &m_hat,
                                double p_tx, double sigma2)
{
    double worst = std::numeric_limits<double>::infinity();
    for (const EffectiveChannel &ec : g_all)
    {
        const double snr =
            p_tx * std::norm((ec.g.adjoint() * m_hat)(0)) / (sigma2 * ec.w_norm2);
        worst = std::min(worst, snr);
    }
    return worst;
}

/// Max-min ascent on the multicast-only beam starting from a unit direction:
/// maximize beta subject to |g_d^H m|^2 >= beta * noise_d and ||m||^2 <= P_tx,
/// with the quadratic gains linearized at the previous iterate. Returns the
/// best unit direction reached; the ascent stops once the QoS threshold is
/// cleared with a small margin.
CVector refine_coverage_direction(CVector m_hat, const std::vector<EffectiveChannel> &g_all,
                                  const harness::SystemConfig &cfg)
{
    const double p_tx = cfg.p_tx_mw();
    const double sigma2 = cfg.sigma2_mw();
    const int n_tx = static_cast<int>(m_hat.size());
    const int k = static_cast<int>(g_all.size());
    CVector m = std::sqrt(p_tx) * m_hat;
    double beta = full_power_multicast_snr(g_all, m_hat, p_tx, sigma2);
    constexpr int kMaxRefinements = 25;
    for (int pass = 0; pass < kMaxRefinements; ++pass)
    {
        const int n_vars = 2 * n_tx + 1; // interleaved re/im of m, then beta
        conic::ConicProgram program(n_vars);
        RVector objective = RVector::Zero(n_vars);
        objective(2 * n_tx) = 1.0;
        program.set_objective(std::move(objective));
        for (int d = 0; d < k; ++d)
        {
            const CVector &g = g_all[static_cast<std::size_t>(d)].g;
            const Complex v_prev = (g.adjoint() * m)(0);
            RVector a = RVector::Zero(n_vars);
            a(2 * n_tx) = sigma2 * g_all[static_cast<std::size_t>(d)].w_norm2;
            for (int i = 0; i < n_tx; ++i)
            {
                a(2 * i) -= 2.0 * (v_prev.real() * g(i).real() - v_prev.imag() * g(i).imag());
                a(2 * i + 1) -=
                    2.0 * (v_prev.real() * g(i).imag() + v_prev.imag() * g(i).real());
            }
            program.add_linear(std::move(a), -std::norm(v_prev));
        }
        {
            RMatrix gq = RMatrix::Zero(2 * n_tx, n_vars);
            gq.leftCols(2 * n_tx).setIdentity();
            program.add_quadratic(std::move(gq), RVector::Zero(2 * n_tx),
                                  RVector::Zero(n_vars), -p_tx);
        }
        const conic::ConicSolution solution = conic::solve_conic(program);
        if (solution.status != conic::SolveStatus::kOptimal)
        {
            break;
        }
        CVector m_next(n_tx);
        for (int i = 0; i < n_tx; ++i)
        {
            m_next(i) = Complex(solution.x(2 * i), solution.x(2 * i + 1));
        }
        const double beta_next = solution.x(2 * n_tx);
        if (beta_next <= beta)
        {
            break;
        }
        m = std::move(m_next);
        beta = beta_next;
        if (beta >= cfg.gamma_min * (1.0 + 1e-3))
        {
            break;
        }
    }
    if (m.norm() == 0.0)
    {
        return m_hat;
    }
    return m.normalized();
}

} // namespace

CVector multicast_cover_direction(const std::vector<EffectiveChannel> &g_all,
                                  const harness::SystemConfig &cfg)
{
    const double p_tx = cfg.p_tx_mw();
    const double sigma2 = cfg.sigma2_mw();
    CVector m_hat = aggregate_multicast_direction(g_all);
    if (full_power_multicast_snr(g_all, m_hat, p_tx, sigma2) >= cfg.gamma_min)
    {
        return m_hat;
    }
    m_hat = refine_coverage_direction(std::move(m_hat), g_all, cfg);
    const double achieved = full_power_multicast_snr(g_all, m_hat, p_tx, sigma2);
    if (achieved < cfg.gamma_min)
    {
        throw ScenarioInfeasibleError("multicast-qos", cfg.gamma_min - achieved);
    }
    return m_hat;
}

std::vector<InitialPoint> initial_point_candidates(const std::vector<EffectiveChannel> &g_all,
                                                   const scheduler::ScheduleDecision &schedule,
                                                   const harness::SystemConfig &cfg);

namespace
{

// ---------------------------------------------------------------------------
// Reduced-space machinery
// ---------------------------------------------------------------------------

struct Reduction
{
    CMatrix basis;             ///< n_tx x r orthonormal
    std::vector<CVector> ghat; ///< reduced effective channels, all K devices
    std::vector<double> noise; ///< sigma2 * ||w_k||^2 per device (mW)
    std::vector<int> sched;    ///< scheduled device indices
    int n_tx = 0;
    int r = 0;
    int k = 0;
    int kp = 0;
    bool multicast = true;
    double p_tx = 0.0;
    double gamma_min = 0.0;
};

Reduction make_reduction(const std::vector<EffectiveChannel> &g_all,
                         const scheduler::ScheduleDecision &schedule,
                         const harness::SystemConfig &cfg, bool multicast)
{
    Reduction red;
    red.k = static_cast<int>(g_all.size());
    if (red.k == 0 || schedule.k() != red.k)
    {
        throw std::invalid_argument("precoder: schedule does not match the device count");
    }
    red.kp = schedule.k_prime();
    red.sched = schedule.selected;
    red.n_tx = static_cast<int>(g_all.front().g.size());
    red.multicast = multicast;
    red.p_tx = cfg.p_tx_mw();
    red.gamma_min = cfg.gamma_min;

    CMatrix stack(red.n_tx, red.k);
    for (int i = 0; i < red.k; ++i)
    {
        if (g_all[static_cast<std::size_t>(i)].g.size() != red.n_tx)
        {
            throw std::invalid_argument("precoder: inconsistent effective channel dimensions");
        }
        stack.col(i) = g_all[static_cast<std::size_t>(i)].g;
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(stack);
    qr.setThreshold(1e-12);
    red.r = std::max<int>(1, static_cast<int>(qr.rank()));
    red.basis = qr.householderQ() * CMatrix::Identity(red.n_tx, red.r);

    red.ghat.reserve(static_cast<std::size_t>(red.k));
    red.noise.reserve(static_cast<std::size_t>(red.k));
    for (const EffectiveChannel &ec : g_all)
    {
        red.ghat.push_back(red.basis.adjoint() * ec.g);
        red.noise.push_back(cfg.sigma2_mw() * ec.w_norm2);
    }
    return red;
}

struct ReducedState
{
    std::vector<CVector> z; ///< kp reduced unicast precoders
    CVector zm;             ///< reduced multicast precoder (size 0 when disabled)
    double alpha = 0.0;
    std::vector<double> signal_lb;
    std::vector<double> interference_ub;
    std::vector<double> multicast_lb;
    std::vector<double> total_interf_ub;
    int iteration = 0;
    std::vector<double> trace;
};

/// Variable packing of the convexified subproblem: interleaved re/im beam
/// coordinates, then alpha, then the lifted bounds.
struct VarLayout
{
    int r = 0;
    int kp = 0;
    int k = 0;
    bool multicast = true;

    int beams() const { return kp + (multicast ? 1 : 0); }
    int z_offset(int j) const { return 2 * r * j; }
    int m_offset() const { return 2 * r * kp; }
    int alpha() const { return 2 * r * beams(); }
    int signal_lb(int i) const { return alpha() + 1 + i; }
    int interf_ub(int i) const { return alpha() + 1 + kp + i; }
    int multicast_lb(int d) const { return alpha() + 1 + 2 * kp + d; }
    int total_ub(int d) const { return alpha() + 1 + 2 * kp + k + d; }
    int total() const { return alpha() + 1 + 2 * kp + (multicast ? 2 * k : 0); }
};

/// Writes the real and imaginary parts of ghat^H z as two rows over the
/// interleaved coordinates of the beam starting at `offset`.
void fill_inner_product_rows(RMatrix &g, int row, const CVector &ghat, int offset)
{
    const int r = static_cast<int>(ghat.size());
    for (int i = 0; i < r; ++i)
    {
        g(row, offset + 2 * i) = ghat(i).real();
        g(row, offset + 2 * i + 1) = ghat(i).imag();
        g(row + 1, offset + 2 * i) = -ghat(i).imag();
        g(row + 1, offset + 2 * i + 1) = ghat(i).real();
    }
}

/// Adds -2 Re{conj(u_prev) ghat^H z} to a linear coefficient vector.
void add_linearized_inner(RVector &a, const CVector &ghat, int offset, Complex u_prev)
{
    const int r = static_cast<int>(ghat.size());
    for (int i = 0; i < r; ++i)
    {
        // Re{u}: (re g, im g), Im{u}: (-im g, re g) on (re z, im z).
        a(offset + 2 * i) += -2.0 * (u_prev.real() * ghat(i).real() - u_prev.imag() * ghat(i).imag());
        a(offset + 2 * i + 1) +=
            -2.0 * (u_prev.real() * ghat(i).imag() + u_prev.imag() * ghat(i).real());
    }
}

Complex inner(const CVector &ghat, const CVector &z) { return (ghat.adjoint() * z)(0); }

conic::ConicProgram build_subproblem(const Reduction &red, const ReducedState &state)
{
    const VarLayout lay{red.r, red.kp, red.k, red.multicast};
    conic::ConicProgram program(lay.total());

    RVector objective = RVector::Zero(lay.total());
    objective(lay.alpha()) = 1.0;
    program.set_objective(std::move(objective));

    // Linearized signal bounds, one per scheduled device.
    for (int i = 0; i < red.kp; ++i)
    {
        const int device = red.sched[static_cast<std::size_t>(i)];
        const CVector &ghat = red.ghat[static_cast<std::size_t>(device)];
        const Complex u_prev = inner(ghat, state.z[static_cast<std::size_t>(i)]);
        RVector a = RVector::Zero(lay.total());
        a(lay.signal_lb(i)) = 1.0;
        add_linearized_inner(a, ghat, lay.z_offset(i), u_prev);
        program.add_linear(std::move(a), -std::norm(u_prev));
    }

    if (red.multicast)
    {
        for (int d = 0; d < red.k; ++d)
        {
            const CVector &ghat = red.ghat[static_cast<std::size_t>(d)];
            const Complex v_prev = inner(ghat, state.zm);
            RVector a = RVector::Zero(lay.total());
            a(lay.multicast_lb(d)) = 1.0;
            add_linearized_inner(a, ghat, lay.m_offset(), v_prev);
            program.add_linear(std::move(a), -std::norm(v_prev));

            RVector qos = RVector::Zero(lay.total());
            qos(lay.total_ub(d)) = red.gamma_min;
            qos(lay.multicast_lb(d)) = -1.0;
            program.add_linear(std::move(qos), 0.0);
        }
    }

    // Nonnegativity of alpha and the lifted bounds.
    for (int idx = lay.alpha(); idx < lay.total(); ++idx)
    {
        RVector a = RVector::Zero(lay.total());
        a(idx) = -1.0;
        program.add_linear(std::move(a), 0.0);
    }

    // Unicast interference bounds.
    for (int i = 0; i < red.kp; ++i)
    {
        const int device = red.sched[static_cast<std::size_t>(i)];
        const CVector &ghat = red.ghat[static_cast<std::size_t>(device)];
        RMatrix g = RMatrix::Zero(2 * (red.kp - 1), lay.total());
        int row = 0;
        for (int j = 0; j < red.kp; ++j)
        {
            if (j == i)
            {
                continue;
            }
            fill_inner_product_rows(g, row, ghat, lay.z_offset(j));
            row += 2;
        }
        RVector b = RVector::Zero(lay.total());
        b(lay.interf_ub(i)) = -1.0;
        program.add_quadratic(std::move(g), RVector::Zero(2 * (red.kp - 1)), std::move(b),
                              red.noise[static_cast<std::size_t>(device)]);
    }

    // Linearized products alpha * t_k <= r_k via the difference of squares.
    for (int i = 0; i < red.kp; ++i)
    {
        const double expansion = state.alpha - state.interference_ub[static_cast<std::size_t>(i)];
        RMatrix g = RMatrix::Zero(1, lay.total());
        g(0, lay.alpha()) = 1.0;
        g(0, lay.interf_ub(i)) = 1.0;
        RVector b = RVector::Zero(lay.total());
        b(lay.signal_lb(i)) = -4.0;
        b(lay.alpha()) = -2.0 * expansion;
        b(lay.interf_ub(i)) = 2.0 * expansion;
        program.add_quadratic(std::move(g), RVector::Zero(1), std::move(b),
                              expansion * expansion);
    }

    if (red.multicast)
    {
        // Total interference bounds, one per device.
        for (int d = 0; d < red.k; ++d)
        {
            const CVector &ghat = red.ghat[static_cast<std::size_t>(d)];
            RMatrix g = RMatrix::Zero(2 * red.kp, lay.total());
            for (int j = 0; j < red.kp; ++j)
            {
                fill_inner_product_rows(g, 2 * j, ghat, lay.z_offset(j));
            }
            RVector b = RVector::Zero(lay.total());
            b(lay.total_ub(d)) = -1.0;
            program.add_quadratic(std::move(g), RVector::Zero(2 * red.kp), std::move(b),
                                  red.noise[static_cast<std::size_t>(d)]);
        }
    }

    // Power budget over every beam coordinate.
    {
        const int beam_coords = 2 * red.r * lay.beams();
        RMatrix g = RMatrix::Zero(beam_coords, lay.total());
        g.leftCols(beam_coords).setIdentity();
        program.add_quadratic(std::move(g), RVector::Zero(beam_coords),
                              RVector::Zero(lay.total()), -red.p_tx);
    }

    return program;
}

/// Re-anchors the lifted values of a state to the exact quantities of its
/// beams. The solver's lifted variables carry residual-level noise; using the
/// recomputed signal/interference values keeps every accepted state exactly
/// feasible in the lifted sense and makes the trace report attained values
/// (the exact lifted alpha always under-claims, so this never inflates it).
void anchor_state(const Reduction &red, ReducedState &state)
{
    state.signal_lb.resize(static_cast<std::size_t>(red.kp));
    state.interference_ub.resize(static_cast<std::size_t>(red.kp));
    double alpha = std::numeric_limits<double>::infinity();
    for (int i = 0; i < red.kp; ++i)
    {
        const int device = red.sched[static_cast<std::size_t>(i)];
        const CVector &ghat = red.ghat[static_cast<std::size_t>(device)];
        double interference = red.noise[static_cast<std::size_t>(device)];
        for (int j = 0; j < red.kp; ++j)
        {
            if (j != i)
            {
                interference += std::norm(inner(ghat, state.z[static_cast<std::size_t>(j)]));
            }
        }
        const double signal = std::norm(inner(ghat, state.z[static_cast<std::size_t>(i)]));
        state.signal_lb[static_cast<std::size_t>(i)] = signal;
        state.interference_ub[static_cast<std::size_t>(i)] = interference;
        alpha = std::min(alpha, signal / interference);
    }
    state.alpha = alpha;
    if (red.multicast)
    {
        state.multicast_lb.resize(static_cast<std::size_t>(red.k));
        state.total_interf_ub.resize(static_cast<std::size_t>(red.k));
        for (int d = 0; d < red.k; ++d)
        {
            const CVector &ghat = red.ghat[static_cast<std::size_t>(d)];
            state.multicast_lb[static_cast<std::size_t>(d)] = std::norm(inner(ghat, state.zm));
            double total = red.noise[static_cast<std::size_t>(d)];
            for (const CVector &z : state.z)
            {
                total += std::norm(inner(ghat, z));
            }
            state.total_interf_ub[static_cast<std::size_t>(d)] = total;
        }
    }
}

ReducedState state_from_solution(const Reduction &red, const ReducedState &previous,
                                 const RVector &x)
{
    const VarLayout lay{red.r, red.kp, red.k, red.multicast};
    ReducedState next;
    next.z.resize(static_cast<std::size_t>(red.kp));
    for (int j = 0; j < red.kp; ++j)
    {
        CVector z(red.r);
        for (int i = 0; i < red.r; ++i)
        {
            z(i) = Complex(x(lay.z_offset(j) + 2 * i), x(lay.z_offset(j) + 2 * i + 1));
        }
        next.z[static_cast<std::size_t>(j)] = std::move(z);
    }
    if (red.multicast)
    {
        CVector zm(red.r);
        for (int i = 0; i < red.r; ++i)
        {
            zm(i) = Complex(x(lay.m_offset() + 2 * i), x(lay.m_offset() + 2 * i + 1));
        }
        next.zm = std::move(zm);
    }
    else
    {
        next.zm = CVector::Zero(red.r);
    }
    // Residual-level power excess is scaled out before anchoring, so the
    // anchored alpha is attained by budget-feasible beams (the basis is
    // orthonormal, reduced norms equal full-space norms).
    double total = next.zm.squaredNorm();
    for (const CVector &z : next.z)
    {
        total += z.squaredNorm();
    }
    if (total > red.p_tx)
    {
        const double scale = std::sqrt(red.p_tx / total);
        for (CVector &z : next.z)
        {
            z *= scale;
        }
        next.zm *= scale;
    }
    anchor_state(red, next);
    next.iteration = previous.iteration + 1;
    next.trace = previous.trace;
    return next;
}

struct StepOutcome
{
    conic::SolveStatus status;
    ReducedState state;
};

StepOutcome reduced_step(const Reduction &red, const ReducedState &state)
{
    const conic::ConicProgram program = build_subproblem(red, state);
    const conic::ConicSolution solution = conic::solve_conic(program);
    if (std::getenv("BEAMWAVE_DEBUG_CCP") != nullptr)
    {
        std::fprintf(stderr,
                     "ccp subproblem: status=%s iters=%d pres=%.2e dres=%.2e gap=%.2e alpha=%.6f\n",
                     conic::to_string(solution.status), solution.iterations,
                     solution.primal_residual, solution.dual_residual, solution.duality_gap,
                     solution.x.size() > 0 ? solution.objective_value : -1.0);
    }
    if (solution.status == conic::SolveStatus::kInfeasible)
    {
        std::ostringstream dump;
        dump << "convexified subproblem reported infeasible although its expansion point is "
                "feasible; program dump follows\n";
        program.dump(dump);
        throw InternalConsistencyError(dump.str());
    }
    // Even a loosely-converged iterate is a valid ascent step: the next state
    // is power-clamped and re-anchored to exact values of its beams, and the
    // caller gates acceptance on the anchored feasibility, not on solver
    // status labels.
    const bool usable = solution.x.size() == program.num_vars() && solution.x.allFinite() &&
                        (solution.status == conic::SolveStatus::kOptimal ||
                         solution.status == conic::SolveStatus::kIterationLimit);
    if (!usable)
    {
        return {conic::SolveStatus::kIterationLimit, state};
    }
    return {conic::SolveStatus::kOptimal, state_from_solution(red, state, solution.x)};
}

ReducedState reduce_state(const Reduction &red, const CcpState &state)
{
    ReducedState rs;
    rs.z.reserve(state.b.size());
    for (const CVector &b : state.b)
    {
        rs.z.push_back(red.basis.adjoint() * b);
    }
    rs.zm = red.multicast && state.m.size() > 0 ? CVector(red.basis.adjoint() * state.m)
                                                : CVector(CVector::Zero(red.r));
    rs.alpha = state.alpha;
    rs.signal_lb = state.signal_lb;
    rs.interference_ub = state.interference_ub;
    rs.multicast_lb = state.multicast_lb;
    rs.total_interf_ub = state.total_interf_ub;
    rs.iteration = state.iteration;
    rs.trace = state.trace;
    return rs;
}

CcpState embed_state(const Reduction &red, const ReducedState &rs)
{
    CcpState out;
    out.b.reserve(rs.z.size());
    for (const CVector &z : rs.z)
    {
        out.b.push_back(red.basis * z);
    }
    out.m = red.multicast ? CVector(red.basis * rs.zm) : CVector(CVector::Zero(red.n_tx));
    out.alpha = rs.alpha;
    out.signal_lb = rs.signal_lb;
    out.interference_ub = rs.interference_ub;
    out.multicast_lb = rs.multicast_lb;
    out.total_interf_ub = rs.total_interf_ub;
    out.iteration = rs.iteration;
    out.trace = rs.trace;
    return out;
}

ReducedState initial_reduced_state(const Reduction &red, const InitialPoint &point)
{
    ReducedState rs;
    rs.z.reserve(point.b0.size());
    for (const CVector &b : point.b0)
    {
        rs.z.push_back(red.basis.adjoint() * b);
    }
    rs.zm = red.multicast && point.m0.size() > 0 ? CVector(red.basis.adjoint() * point.m0)
                                                 : CVector(CVector::Zero(red.r));
    anchor_state(red, rs);
    rs.iteration = 0;
    rs.trace = {rs.alpha};
    return rs;
}

/// The anchored multicast SINRs are exact, so QoS feasibility of a state is a
/// direct ratio test.
bool meets_multicast_qos(const Reduction &red, const ReducedState &state, double gamma_min)
{
    if (!red.multicast)
    {
        return true;
    }
    for (int d = 0; d < red.k; ++d)
    {
        if (state.multicast_lb[static_cast<std::size_t>(d)] <
            gamma_min * (1.0 - 1e-6) * state.total_interf_ub[static_cast<std::size_t>(d)])
        {
            return false;
        }
    }
    return true;
}

/// Verified extrapolation along the last step direction: candidates are
/// power-clamped, re-anchored and QoS-checked, and only adopted when they
/// improve the attained alpha. Slow convex-concave tails crawl along flat
/// valleys; stepping further in the same direction often doubles progress at
/// the cost of one cheap evaluation.
ReducedState extrapolate_step(const Reduction &red, const ReducedState &previous,
                              const ReducedState &base, double gamma_min)
{
    ReducedState best = base;
    for (const double theta : {15.0, 7.0, 3.0, 1.0})
    {
        ReducedState cand = base;
        for (std::size_t j = 0; j < cand.z.size(); ++j)
        {
            cand.z[j] = base.z[j] + theta * (base.z[j] - previous.z[j]);
        }
        if (red.multicast)
        {
            cand.zm = base.zm + theta * (base.zm - previous.zm);
        }
        double total = red.multicast ? cand.zm.squaredNorm() : 0.0;
        for (const CVector &z : cand.z)
        {
            total += z.squaredNorm();
        }
        if (total > red.p_tx)
        {
            const double scale = std::sqrt(red.p_tx / total);
            for (CVector &z : cand.z)
            {
                z *= scale;
            }
            cand.zm *= scale;
        }
        anchor_state(red, cand);
        if (!meets_multicast_qos(red, cand, gamma_min))
        {
            continue;
        }
        if (cand.alpha > best.alpha)
        {
            best = std::move(cand);
        }
    }
    return best;
}

/// Scales the beams down to the power budget if numerical slack pushed the
/// total slightly above it; SINRs move by at most the same relative amount.
void clamp_power(std::vector<CVector> &b, CVector &m, double p_tx)
{
    double total = m.size() > 0 ? m.squaredNorm() : 0.0;
    for (const CVector &bk : b)
    {
        total += bk.squaredNorm();
    }
    if (total > p_tx && total > 0.0)
    {
        const double scale = std::sqrt(p_tx / total);
        for (CVector &bk : b)
        {
            bk *= scale;
        }
        if (m.size() > 0)
        {
            m *= scale;
        }
    }
}

/// The convex-concave loop from a fixed start. Returns true if it stopped by
/// the epsilon rule (or ascent saturation) rather than by the iteration cap.
bool run_ccp_loop(const Reduction &red, const harness::SystemConfig &cfg, ReducedState &state)
{
    for (int iteration = 1; iteration <= cfg.n_conv; ++iteration)
    {
        StepOutcome outcome = reduced_step(red, state);
        if (outcome.status != conic::SolveStatus::kOptimal ||
            !meets_multicast_qos(red, outcome.state, cfg.gamma_min))
        {
            return false; // keep the last accepted iterate
        }
        if (outcome.state.alpha < state.alpha)
        {
            // The ascent saturated below solver precision; the previous
            // iterate stays and the loop is converged.
            return true;
        }
        ReducedState next = extrapolate_step(red, state, outcome.state, cfg.gamma_min);
        const double delta = next.alpha - state.alpha;
        state = std::move(next);
        state.trace.push_back(state.alpha);
        if (delta <= cfg.epsilon)
        {
            return true;
        }
    }
    return false;
}

BeamformingSolution run_ccp(const std::vector<EffectiveChannel> &g_all,
                            const scheduler::ScheduleDecision &schedule,
                            const harness::SystemConfig &cfg, bool multicast)
{
    const Reduction red = make_reduction(g_all, schedule, cfg, multicast);
    ReducedState state;
    bool converged = false;
    if (multicast)
    {
        // Run from the strongest warm start; if the loop fails to converge
        // within the iteration budget, restart once from the next candidate
        // and keep the converged (else the better) outcome.
        const std::vector<InitialPoint> points = initial_point_candidates(g_all, schedule, cfg);
        state = initial_reduced_state(red, points.front());
        converged = run_ccp_loop(red, cfg, state);
        for (std::size_t p = 1; p < points.size() && !converged; ++p)
        {
            ReducedState retry = initial_reduced_state(red, points[p]);
            const bool retry_converged = run_ccp_loop(red, cfg, retry);
            if (retry_converged || retry.alpha > state.alpha)
            {
                state = std::move(retry);
                converged = retry_converged;
            }
        }
    }
    else
    {
        // Zero-forcing warm start with a max-min power split: with exact
        // nulling the worst SINR is equalized by a_i proportional to
        // noise_i / |g_i^H bhat_i|^2.
        std::vector<EffectiveChannel> g_sched;
        for (int idx : red.sched)
        {
            g_sched.push_back(g_all[static_cast<std::size_t>(idx)]);
        }
        const std::vector<CVector> directions = zero_forcing_directions(g_sched);
        std::vector<double> inv_gain(static_cast<std::size_t>(red.kp));
        double inv_sum = 0.0;
        for (int i = 0; i < red.kp; ++i)
        {
            const int device = red.sched[static_cast<std::size_t>(i)];
            const double gain = std::norm(
                (g_all[static_cast<std::size_t>(device)].g.adjoint() * directions[static_cast<std::size_t>(i)])(0));
            if (gain <= 0.0)
            {
                throw SingularConfigurationError("unicast warm start: zero direct gain");
            }
            inv_gain[static_cast<std::size_t>(i)] =
                cfg.sigma2_mw() * g_all[static_cast<std::size_t>(device)].w_norm2 / gain;
            inv_sum += inv_gain[static_cast<std::size_t>(i)];
        }
        InitialPoint unicast_point;
        unicast_point.b0.resize(static_cast<std::size_t>(red.kp));
        unicast_point.a_unicast.resize(static_cast<std::size_t>(red.kp));
        for (int i = 0; i < red.kp; ++i)
        {
            const double power = cfg.p_tx_mw() * inv_gain[static_cast<std::size_t>(i)] / inv_sum;
            unicast_point.a_unicast[static_cast<std::size_t>(i)] = power;
            unicast_point.b0[static_cast<std::size_t>(i)] =
                std::sqrt(power) * directions[static_cast<std::size_t>(i)];
        }
        unicast_point.m0 = CVector::Zero(red.n_tx);
        unicast_point.t0.resize(static_cast<std::size_t>(red.kp));
        double alpha0 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < red.kp; ++i)
        {
            const int device = red.sched[static_cast<std::size_t>(i)];
            const CVector &g = g_all[static_cast<std::size_t>(device)].g;
            double interference = cfg.sigma2_mw() * g_all[static_cast<std::size_t>(device)].w_norm2;
            for (int j = 0; j < red.kp; ++j)
            {
                if (j != i)
                {
                    interference +=
                        std::norm((g.adjoint() * unicast_point.b0[static_cast<std::size_t>(j)])(0));
                }
            }
            unicast_point.t0[static_cast<std::size_t>(i)] = interference;
            const double signal =
                std::norm((g.adjoint() * unicast_point.b0[static_cast<std::size_t>(i)])(0));
            alpha0 = std::min(alpha0, signal / interference);
        }
        unicast_point.alpha0 = alpha0;
        state = initial_reduced_state(red, unicast_point);
        converged = run_ccp_loop(red, cfg, state);
    }

    BeamformingSolution solution;
    solution.b.reserve(state.z.size());
    for (const CVector &z : state.z)
    {
        solution.b.push_back(red.basis * z);
    }
    solution.m = multicast ? CVector(red.basis * state.zm) : CVector(CVector::Zero(red.n_tx));
    clamp_power(solution.b, solution.m, red.p_tx);
    solution.iterations = state.iteration;
    solution.converged = converged;
    solution.trace = state.trace;

    const FeasibilityReport report = verify_design(g_all, schedule, solution.b, solution.m, cfg);
    if (report.total_power > red.p_tx * (1.0 + 1e-9))
    {
        throw InternalConsistencyError("solve_precoders: power budget violated after clamping");
    }
    if (multicast && report.min_multicast_sinr < cfg.gamma_min * (1.0 - 1e-6))
    {
        throw InternalConsistencyError("solve_precoders: multicast constraint violated at the output");
    }
    if (report.min_unicast_sinr < state.alpha - 1e-5)
    {
        std::ostringstream what;
        what.precision(17);
        what << "solve_precoders: lifted alpha not attained by the output (alpha " << state.alpha
             << ", recomputed " << report.min_unicast_sinr << ")";
        throw InternalConsistencyError(what.str());
    }
    // Report the alpha the returned precoders actually attain.
    solution.alpha = report.min_unicast_sinr;
    return solution;
}

} // namespace

std::vector<InitialPoint> initial_point_candidates(const std::vector<EffectiveChannel> &g_all,
                                                   const scheduler::ScheduleDecision &schedule,
                                                   const harness::SystemConfig &cfg)
{
    if (cfg.gamma_min <= 0.0)
    {
        throw std::invalid_argument("build_initial_point: gamma_min must be positive");
    }
    const int k = static_cast<int>(g_all.size());
    if (k == 0 || schedule.k() != k)
    {
        throw std::invalid_argument("build_initial_point: schedule does not match device count");
    }
    const int kp = schedule.k_prime();
    const double p_tx = cfg.p_tx_mw();
    const double sigma2 = cfg.sigma2_mw();

    std::vector<EffectiveChannel> g_sched;
    g_sched.reserve(static_cast<std::size_t>(kp));
    for (int idx : schedule.selected)
    {
        g_sched.push_back(g_all[static_cast<std::size_t>(idx)]);
    }
    // Null toward every device when the array has the degrees of freedom:
    // unscheduled devices then see no unicast interference, which frees the
    // QoS constraint and admits far stronger warm-start unicast powers.
    // Otherwise null among the scheduled devices only.
    std::vector<CVector> directions;
    const int n_tx = static_cast<int>(g_all.front().g.size());
    if (k <= n_tx)
    {
        const std::vector<CVector> all_directions = zero_forcing_directions(g_all);
        directions.reserve(static_cast<std::size_t>(kp));
        for (int idx : schedule.selected)
        {
            directions.push_back(all_directions[static_cast<std::size_t>(idx)]);
        }
    }
    else
    {
        directions = zero_forcing_directions(g_sched);
    }
    // Cross gains h(d, j) = g_d^H bhat_j for every device (independent of the
    // multicast direction) and the noise terms.
    CMatrix h(k, kp);
    RVector noise(k);
    for (int d = 0; d < k; ++d)
    {
        const CVector &g = g_all[static_cast<std::size_t>(d)].g;
        for (int j = 0; j < kp; ++j)
        {
            h(d, j) = (g.adjoint() * directions[static_cast<std::size_t>(j)])(0);
        }
        noise(d) = sigma2 * g_all[static_cast<std::size_t>(d)].w_norm2;
    }

    // Power allocation for a fixed multicast direction: minimize the total
    // unicast interference subject to the QoS at every device and the power
    // budget, then (the objective is degenerate under exact zero forcing)
    // balance the allocation by maximizing the worst direct-link SNR over the
    // interference-optimal set.
    auto allocate = [&](const CVector &m_hat) -> std::optional<InitialPoint> {
        CVector hm(k);
        for (int d = 0; d < k; ++d)
        {
            hm(d) = (g_all[static_cast<std::size_t>(d)].g.adjoint() * m_hat)(0);
        }
        // The QoS set is nonempty iff full power on the multicast beam alone
        // meets the threshold at every device.
        double worst_slack = -std::numeric_limits<double>::infinity();
        for (int d = 0; d < k; ++d)
        {
            worst_slack =
                std::max(worst_slack, cfg.gamma_min * noise(d) - p_tx * std::norm(hm(d)));
        }
        if (worst_slack > 0.0)
        {
            return std::nullopt;
        }

        const int n_vars = kp + 1; // unicast powers then the multicast power
        RVector interference_cost = RVector::Zero(n_vars);
        for (int j = 0; j < kp; ++j)
        {
            double cross = 0.0;
            for (int i = 0; i < kp; ++i)
            {
                if (i != j)
                {
                    cross += std::norm(h(schedule.selected[static_cast<std::size_t>(i)], j));
                }
            }
            interference_cost(j) = cross;
        }
        auto add_shared_rows = [&](conic::ConicProgram &lp, int width) {
            auto widen = [&](const RVector &a) {
                RVector wide = RVector::Zero(width);
                wide.head(n_vars) = a;
                return wide;
            };
            for (int d = 0; d < k; ++d)
            {
                RVector a(n_vars);
                for (int j = 0; j < kp; ++j)
                {
                    a(j) = cfg.gamma_min * std::norm(h(d, j));
                }
                a(kp) = -std::norm(hm(d));
                lp.add_linear(widen(a), -cfg.gamma_min * noise(d));
            }
            lp.add_linear(widen(RVector::Ones(n_vars)), p_tx);
            for (int j = 0; j < width; ++j)
            {
                RVector a = RVector::Zero(width);
                a(j) = -1.0;
                lp.add_linear(std::move(a), 0.0);
            }
        };

        conic::ConicProgram lp(n_vars);
        add_shared_rows(lp, n_vars);
        lp.set_objective(-interference_cost);
        const conic::ConicSolution lp_solution = conic::solve_conic(lp);
        RVector powers;
        // A strictly feasible near-optimal point serves as well as a
        // certified optimum for a degenerate objective.
        const bool lp_usable =
            lp_solution.status == conic::SolveStatus::kOptimal ||
            (lp_solution.status == conic::SolveStatus::kIterationLimit &&
             lp_solution.x.size() == n_vars && lp_solution.x.allFinite() &&
             lp.max_violation(lp_solution.x) <= 1e-9 * (1.0 + p_tx));
        if (lp_usable)
        {
            powers = lp_solution.x;
            const double f1 = interference_cost.dot(powers);
            conic::ConicProgram lp2(n_vars + 1); // allocation plus the worst SNR
            {
                RVector objective = RVector::Zero(n_vars + 1);
                objective(n_vars) = 1.0;
                lp2.set_objective(std::move(objective));
            }
            add_shared_rows(lp2, n_vars + 1);
            {
                RVector a = RVector::Zero(n_vars + 1);
                a.head(n_vars) = interference_cost;
                lp2.add_linear(std::move(a), f1 + 1e-9 * (1.0 + std::abs(f1)));
            }
            for (int i = 0; i < kp; ++i)
            {
                const int device = schedule.selected[static_cast<std::size_t>(i)];
                RVector a = RVector::Zero(n_vars + 1);
                a(i) = -std::norm(h(device, i));
                a(n_vars) = noise(device);
                lp2.add_linear(std::move(a), 0.0);
            }
            const conic::ConicSolution lp2_solution = conic::solve_conic(lp2);
            const bool lp2_usable =
                lp2_solution.status == conic::SolveStatus::kOptimal ||
                (lp2_solution.status == conic::SolveStatus::kIterationLimit &&
                 lp2_solution.x.size() == n_vars + 1 && lp2_solution.x.allFinite() &&
                 lp2.max_violation(lp2_solution.x) <= 1e-9 * (1.0 + p_tx));
            if (lp2_usable)
            {
                powers = lp2_solution.x.head(n_vars);
            }
        }
        else if (lp_solution.status == conic::SolveStatus::kInfeasible)
        {
            throw InternalConsistencyError(
                "build_initial_point: power allocation reported infeasible although full "
                "multicast power satisfies the QoS margin");
        }
        else
        {
            // Fall back to a direct feasible split: a small equal unicast
            // share with the rest on the multicast beam.
            powers = RVector::Zero(n_vars);
            bool found = false;
            for (double share : {0.25, 0.1, 0.01, 0.001, 1e-6})
            {
                powers.head(kp).setConstant(share * p_tx / kp);
                powers(kp) = (1.0 - share) * p_tx;
                bool feasible = true;
                for (int d = 0; d < k && feasible; ++d)
                {
                    double denom = noise(d);
                    for (int j = 0; j < kp; ++j)
                    {
                        denom += powers(j) * std::norm(h(d, j));
                    }
                    feasible = powers(kp) * std::norm(hm(d)) >= cfg.gamma_min * denom;
                }
                if (feasible)
                {
                    found = true;
                    break;
                }
            }
            if (!found)
            {
                return std::nullopt;
            }
        }

        // Numerical hygiene: powers are nonnegative and within budget.
        powers = powers.cwiseMax(0.0);
        const double total = powers.sum();
        if (total > p_tx)
        {
            powers *= p_tx / total;
        }

        InitialPoint point;
        point.a_unicast.assign(powers.data(), powers.data() + kp);
        point.a_multicast = powers(kp);
        point.b0.resize(static_cast<std::size_t>(kp));
        for (int j = 0; j < kp; ++j)
        {
            point.b0[static_cast<std::size_t>(j)] =
                std::sqrt(powers(j)) * directions[static_cast<std::size_t>(j)];
        }
        point.m0 = std::sqrt(powers(kp)) * m_hat;
        point.t0.resize(static_cast<std::size_t>(kp));
        double alpha0 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kp; ++i)
        {
            const int device = schedule.selected[static_cast<std::size_t>(i)];
            double interference = noise(device);
            for (int j = 0; j < kp; ++j)
            {
                if (j != i)
                {
                    interference += powers(j) * std::norm(h(device, j));
                }
            }
            point.t0[static_cast<std::size_t>(i)] = interference;
            alpha0 = std::min(alpha0, powers(i) * std::norm(h(device, i)) / interference);
        }
        point.alpha0 = alpha0;
        return point;
    };

    // Multicast direction candidates: the covering aggregate eigen-direction,
    // and a scheduled-subspace eigen-direction (coverage refined) that favors
    // the devices whose own unicast layer the multicast must dominate. The
    // strongest admissible warm start wins.
    std::vector<CVector> m_candidates;
    m_candidates.push_back(multicast_cover_direction(g_all, cfg));
    {
        CVector scheduled_dir = aggregate_multicast_direction(g_sched);
        if (full_power_multicast_snr(g_all, scheduled_dir, p_tx, sigma2) < cfg.gamma_min)
        {
            scheduled_dir = refine_coverage_direction(std::move(scheduled_dir), g_all, cfg);
        }
        if (full_power_multicast_snr(g_all, scheduled_dir, p_tx, sigma2) >= cfg.gamma_min)
        {
            m_candidates.push_back(std::move(scheduled_dir));
        }
    }

    std::vector<InitialPoint> points;
    for (const CVector &m_hat : m_candidates)
    {
        std::optional<InitialPoint> candidate = allocate(m_hat);
        if (candidate)
        {
            points.push_back(std::move(*candidate));
        }
    }
    if (points.empty())
    {
        throw ScenarioInfeasibleError("multicast-qos", cfg.gamma_min);
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const InitialPoint &a, const InitialPoint &b) { return a.alpha0 > b.alpha0; });
    return points;
}

InitialPoint build_initial_point(const std::vector<EffectiveChannel> &g_all,
                                 const scheduler::ScheduleDecision &schedule,
                                 const harness::SystemConfig &cfg)
{
    return initial_point_candidates(g_all, schedule, cfg).front();
}

CcpState ccp_step(const CcpState &state, const std::vector<EffectiveChannel> &g_all,
                  const scheduler::ScheduleDecision &schedule, const harness::SystemConfig &cfg)
{
    const bool multicast = state.m.size() > 0 && state.m.squaredNorm() > 0.0;
    const Reduction red = make_reduction(g_all, schedule, cfg, multicast);
    const StepOutcome outcome = reduced_step(red, reduce_state(red, state));
    if (outcome.status != conic::SolveStatus::kOptimal)
    {
        throw InternalConsistencyError(std::string("ccp_step: subproblem finished with status ") +
                                       conic::to_string(outcome.status));
    }
    CcpState next = embed_state(red, outcome.state);
    next.trace.push_back(next.alpha);
    return next;
}

BeamformingSolution solve_precoders(const std::vector<EffectiveChannel> &g_all,
                                    const scheduler::ScheduleDecision &schedule,
                                    const harness::SystemConfig &cfg)
{
    return run_ccp(g_all, schedule, cfg, /*multicast=*/true);
}

BeamformingSolution solve_unicast_precoders(const std::vector<EffectiveChannel> &g_all,
                                            const scheduler::ScheduleDecision &schedule,
                                            const harness::SystemConfig &cfg)
{
    return run_ccp(g_all, schedule, cfg, /*multicast=*/false);
}

FeasibilityReport verify_design(const std::vector<EffectiveChannel> &g_all,
                                const scheduler::ScheduleDecision &schedule,
                                const std::vector<CVector> &b, const CVector &m,
                                const harness::SystemConfig &cfg)
{
    const int kp = schedule.k_prime();
    if (static_cast<int>(b.size()) != kp)
    {
        throw std::invalid_argument("verify_design: unicast precoder count mismatch");
    }
    const double sigma2 = cfg.sigma2_mw();
    FeasibilityReport report;
    report.min_unicast_sinr = std::numeric_limits<double>::infinity();
    report.min_multicast_sinr = std::numeric_limits<double>::infinity();

    report.total_power = m.size() > 0 ? m.squaredNorm() : 0.0;
    for (const CVector &bk : b)
    {
        report.total_power += bk.squaredNorm();
    }

    for (std::size_t d = 0; d < g_all.size(); ++d)
    {
        const CVector &g = g_all[d].g;
        const double noise = sigma2 * g_all[d].w_norm2;
        double total_interference = noise;
        for (const CVector &bk : b)
        {
            total_interference += std::norm((g.adjoint() * bk)(0));
        }
        if (m.size() > 0)
        {
            const double multicast_sinr = std::norm((g.adjoint() * m)(0)) / total_interference;
            report.min_multicast_sinr = std::min(report.min_multicast_sinr, multicast_sinr);
        }
    }

    for (int i = 0; i < kp; ++i)
    {
        const int device = schedule.selected[static_cast<std::size_t>(i)];
        const CVector &g = g_all[static_cast<std::size_t>(device)].g;
        const double noise = sigma2 * g_all[static_cast<std::size_t>(device)].w_norm2;
        double interference = noise;
        for (int j = 0; j < kp; ++j)
        {
            if (j != i)
            {
                interference += std::norm((g.adjoint() * b[static_cast<std::size_t>(j)])(0));
            }
        }
        const double sinr =
            std::norm((g.adjoint() * b[static_cast<std::size_t>(i)])(0)) / interference;
        report.min_unicast_sinr = std::min(report.min_unicast_sinr, sinr);
    }
    return report;
}

} // namespace beamwave::precoder
