// Copyright 2026 The ToyBox Breakout Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOYBOX_TOYBOX_HPP_
#define TOYBOX_TOYBOX_HPP_

#include "toybox/agents.hpp"
#include "toybox/breakout.hpp"
#include "toybox/config.hpp"
#include "toybox/env.hpp"
#include "toybox/errors.hpp"
#include "toybox/harness.hpp"
#include "toybox/intervention.hpp"
#include "toybox/render.hpp"
#include "toybox/results.hpp"

#endif  // TOYBOX_TOYBOX_HPP_
