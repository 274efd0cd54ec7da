// Copyright 2026 The lrmac Authors.
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

namespace lrmac {

// Invalid argument values (non-positive distances, singular noise, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested rates cannot be reached (zero channel, energy divergence,
// target outside the convex hull of the candidate rate vectors).
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A tie cluster produces more candidate decoding orders than allowed.
class TooManyOrders : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrmac
