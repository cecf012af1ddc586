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

#include "longigate/algebra.hpp"
#include "longigate/config.hpp"
#include "longigate/dynamics.hpp"
#include "longigate/error.hpp"
#include "longigate/experiments.hpp"
#include "longigate/fidelity.hpp"
#include "longigate/integrator.hpp"
#include "longigate/model.hpp"
#include "longigate/parallel.hpp"
#include "longigate/selftest.hpp"
#include "longigate/version.hpp"
