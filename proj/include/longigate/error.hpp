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

#include <stdexcept>
#include <string>

namespace longigate {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  non_finite,
  unphysical_state,
  unphysical_params,
  resonant_modulation,
  hybridized_mode_resonance,
  no_commensurate_schedule,
  unsupported_model,
  integration_failure,
  unphysical_channel,
  cutoff_not_converged,
  config_error,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::non_finite: return "non-finite value";
    case ErrorCode::unphysical_state: return "unphysical state";
    case ErrorCode::unphysical_params: return "unphysical parameters";
    case ErrorCode::resonant_modulation: return "resonant modulation";
    case ErrorCode::hybridized_mode_resonance: return "hybridized-mode resonance";
    case ErrorCode::no_commensurate_schedule: return "no commensurate schedule";
    case ErrorCode::unsupported_model: return "unsupported model";
    case ErrorCode::integration_failure: return "integration failure";
    case ErrorCode::unphysical_channel: return "unphysical channel";
    case ErrorCode::cutoff_not_converged: return "cutoff not converged";
    case ErrorCode::config_error: return "config error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace longigate
