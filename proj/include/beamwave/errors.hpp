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

#include <stdexcept>
#include <string>

namespace beamwave
{

/// A scenario cannot meet its QoS constraints (e.g. the multicast SINR
/// threshold is unattainable even with all power on the multicast beam).
/// Carries the name of the failing constraint and the residual slack.
class ScenarioInfeasibleError : public std::runtime_error
{
  public:
    ScenarioInfeasibleError(const std::string &constraint, double slack)
        : std::runtime_error("scenario infeasible: constraint '" + constraint +
                             "' unattainable (slack " + std::to_string(slack) + ")"),
          constraint_(constraint), slack_(slack)
    {
    }

    const std::string &constraint() const { return constraint_; }
    double slack() const { return slack_; }

  private:
    std::string constraint_;
    double slack_;
};

/// A numerically singular configuration, e.g. a rank-deficient stack of
/// effective channels that admits no zero-forcing directions.
class SingularConfigurationError : public std::runtime_error
{
  public:
    explicit SingularConfigurationError(const std::string &what) : std::runtime_error(what) {}
};

/// An internal contract was violated (e.g. a convexified subproblem reported
/// infeasible although its expansion point is feasible by construction).
/// The message carries a diagnostic dump.
class InternalConsistencyError : public std::logic_error
{
  public:
    explicit InternalConsistencyError(const std::string &what) : std::logic_error(what) {}
};

} // namespace beamwave
