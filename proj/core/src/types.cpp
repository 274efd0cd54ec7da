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

#include "lrmac/types.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "lrmac/errors.hpp"

namespace lrmac {

DecodingOrder::DecodingOrder(std::vector<int> seq) : seq_(std::move(seq)) {
  std::vector<int> sorted = seq_;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i)
    if (sorted[i] != i) throw DomainError("decoding order is not a permutation");
}

DecodingOrder DecodingOrder::identity(int users) {
  std::vector<int> seq(users);
  std::iota(seq.begin(), seq.end(), 0);
  return DecodingOrder(std::move(seq));
}

int DecodingOrder::position_of(int u) const {
  auto it = std::find(seq_.begin(), seq_.end(), u);
  if (it == seq_.end()) throw DomainError("user not in decoding order");
  return static_cast<int>(it - seq_.begin());
}

std::string DecodingOrder::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < seq_.size(); ++k) {
    if (k) out += '-';
    out += std::to_string(seq_[k] + 1);
  }
  return out;
}

DecodingOrder DecodingOrder::parse(const std::string& text) {
  std::vector<int> seq;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '-')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9)
      throw DomainError("malformed decoding order: " + text);
    seq.push_back(std::stoi(item) - 1);
  }
  return DecodingOrder(std::move(seq));
}

}  // namespace lrmac
