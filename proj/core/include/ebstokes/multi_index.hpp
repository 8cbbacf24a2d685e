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

#pragma once

#include <vector>

namespace ebs {

/// 2D multi-index q = (qx, qy); exponents of a monomial (x-c.x)^qx (y-c.y)^qy.
struct MultiIndex {
  int qx = 0;
  int qy = 0;

  int total() const { return qx + qy; }
  int operator[](int d) const { return d == 0 ? qx : qy; }

  bool operator==(const MultiIndex&) const = default;

  /// q - e_d; caller must guarantee q[d] > 0.
  MultiIndex minus(int d) const {
    return d == 0 ? MultiIndex{qx - 1, qy} : MultiIndex{qx, qy - 1};
  }
};

/// Number of 2D multi-indices with |q| <= max_degree: (d+1)(d+2)/2.
int multi_index_count(int max_degree);

/// Canonical graded-lexicographic ordering: total degree ascending, qx
/// descending within a degree. Deterministic and total.
std::vector<MultiIndex> multi_index_set(int dim, int max_degree);

/// Position of q in the canonical ordering.
int multi_index_position(const MultiIndex& q);

double multi_index_factorial(const MultiIndex& q);

/// Componentwise binomial coefficient C(q,p) = C(qx,px)*C(qy,py).
double multi_index_binomial(const MultiIndex& q, const MultiIndex& p);

double binomial(int n, int k);

}  // namespace ebs
