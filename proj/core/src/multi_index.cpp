/*
   Copyright 2026 The ebstokes authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "ebstokes/multi_index.hpp"

#include <cassert>
#include <stdexcept>

namespace ebs {

int multi_index_count(int max_degree) {
  return (max_degree + 1) * (max_degree + 2) / 2;
}

std::vector<MultiIndex> multi_index_set(int dim, int max_degree) {
  if (dim != 2) throw std::invalid_argument("multi_index_set: only D=2 is supported");
  if (max_degree < 0) throw std::invalid_argument("multi_index_set: negative degree");
  std::vector<MultiIndex> out;
  out.reserve(multi_index_count(max_degree));
  for (int g = 0; g <= max_degree; ++g)
    for (int qx = g; qx >= 0; --qx) out.push_back({qx, g - qx});
  return out;
}

int multi_index_position(const MultiIndex& q) {
  const int g = q.total();
  return g * (g + 1) / 2 + (g - q.qx);
}

double multi_index_factorial(const MultiIndex& q) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  };
  return fact(q.qx) * fact(q.qy);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double multi_index_binomial(const MultiIndex& q, const MultiIndex& p) {
  return binomial(q.qx, p.qx) * binomial(q.qy, p.qy);
}

}  // namespace ebs
