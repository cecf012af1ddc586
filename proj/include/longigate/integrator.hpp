// Copyright 2026 The longigate Authors
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

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "longigate/algebra.hpp"

namespace longigate {

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

/**
 * Dormand–Prince 5(4) with FSAL. The local error estimate is measured in the
 * max norm against abs_tol + rel_tol · ‖y‖_max.
 *
 * `rhs(t, y, dy)` writes dy/dt into `dy`. `on_accept(t, y)` runs after every
 * accepted step. The stepper lands exactly on every entry of `stops`
 * (ascending, inside (t0, t1]) and calls `on_stop(index, y)` there.
 */
template <class State, class Rhs, class OnAccept, class OnStop>
State integrate_dopri5(const Rhs& rhs, State y, double t0, double t1, const StepControl& ctl, std::span<const double> stops,
                       OnAccept&& on_accept, OnStop&& on_stop, IntegrationStats* stats = nullptr) {
  // Butcher tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b − b̂ (fifth minus fourth order weights).
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                   e7 = -1.0 / 40;

  IntegrationStats local;
  IntegrationStats& st = stats ? *stats : local;
  if (t1 <= t0) return y;

  State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, tmp = y, ynew = y;
  rhs(t0, y, k1);
  ++st.rhs_evaluations;

  double t = t0;
  const double span = t1 - t0;
  // Proposed step: a hundredth of the local derivative time scale.
  double h = std::min(ctl.max_step, span);
  {
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = k1.cwiseAbs().maxCoeff();
    if (d1 > 0.0 && d0 > 0.0) h = std::min(h, 0.01 * d0 / d1);
    h = std::max(h, 1e-12 * span);
  }

  std::size_t next_stop = 0;
  while (next_stop < stops.size() && stops[next_stop] <= t0) ++next_stop;

  while (t < t1) {
    if (st.accepted + st.rejected > ctl.max_steps)
      throw Error(ErrorCode::integration_failure, "step budget exhausted");
    double target = t1;
    if (next_stop < stops.size()) target = std::min(target, stops[next_stop]);
    bool lands = false;
    double h_try = h;
    if (t + h >= target || target - (t + h) < 1e-12 * span) {
      h_try = target - t;
      lands = true;
    }

    tmp = y + h_try * a21 * k1;
    rhs(t + c2 * h_try, tmp, k2);
    tmp = y + h_try * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h_try, tmp, k3);
    tmp = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h_try, tmp, k4);
    tmp = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h_try, tmp, k5);
    tmp = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h_try, tmp, k6);
    ynew = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h_try, ynew, k7);
    st.rhs_evaluations += 6;

    tmp = h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    // Error relative to the state's max-norm: components are amplitudes of one
    // operator, so tiny entries should not force steps on their own.
    const double scale = ctl.abs_tol + ctl.rel_tol * std::max(y.cwiseAbs().maxCoeff(), ynew.cwiseAbs().maxCoeff());
    const double err = tmp.cwiseAbs().maxCoeff() / scale;
    if (!std::isfinite(err)) throw Error(ErrorCode::non_finite, "integration produced non-finite values");

    if (err <= 1.0) {
      t = lands ? target : t + h_try;
      std::swap(y, ynew);
      std::swap(k1, k7);
      ++st.accepted;
      on_accept(t, static_cast<const State&>(y));
      if (lands && next_stop < stops.size() && target == stops[next_stop]) {
        on_stop(next_stop, static_cast<const State&>(y));
        ++next_stop;
      }
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // A step shortened to hit a landing point says nothing bad about h.
      h = lands ? std::max(h, h_try * factor) : h_try * factor;
      h = std::min(h, ctl.max_step);
    } else {
      ++st.rejected;
      h = h_try * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
    if (h < 1e-15 * span) throw Error(ErrorCode::integration_failure, "step size underflow");
  }
  return y;
}

template <class State, class Rhs>
State integrate_dopri5(const Rhs& rhs, State y, double t0, double t1, const StepControl& ctl,
                       IntegrationStats* stats = nullptr) {
  return integrate_dopri5(
      rhs, std::move(y), t0, t1, ctl, std::span<const double>{}, [](double, const State&) {},
      [](std::size_t, const State&) {}, stats);
}

}  // namespace longigate
