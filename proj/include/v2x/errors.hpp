// Copyright 2026 The v2x-market Authors
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

#ifndef V2X_ERRORS_HPP
#define V2X_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace v2x {

// Every failure carries the pipeline stage it came from ("validation",
// "clearing", "io", ...) so the CLI can report stage-tagged diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace v2x

#endif  // V2X_ERRORS_HPP
