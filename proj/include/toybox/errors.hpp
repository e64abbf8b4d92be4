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

#ifndef TOYBOX_ERRORS_HPP_
#define TOYBOX_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace toybox {

// A rejected value, tagged with the path of the offending field
// (e.g. "config.row_points" or "state.ball_vel").
class FieldError : public std::invalid_argument {
 public:
  FieldError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// An operation invoked in a lifecycle that does not permit it.
class LifecycleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace toybox

#endif  // TOYBOX_ERRORS_HPP_
