// Copyright 2026 The weakval authors
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

// Umbrella header for the numerical core. The scenario-file parser, CSV
// writer, and command-line front end live in their own headers
// (scenario.hpp, csv.hpp, cli.hpp) so that library users do not pull in
// the argument-parsing dependency.

#pragma once

#include "weakval/analysis.hpp"
#include "weakval/common.hpp"
#include "weakval/entangle.hpp"
#include "weakval/errors.hpp"
#include "weakval/grid.hpp"
#include "weakval/hilbert.hpp"
#include "weakval/pointer.hpp"
#include "weakval/random.hpp"
#include "weakval/readout.hpp"
