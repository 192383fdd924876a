// Copyright 2026 The Retrofit Authors
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


#include <cstdio>
#include <vector>
using Index = int;
template <class T>
using Seq = std::vector<T>;
Index total(const Seq<Index>& v) {
  Index s = 0;
  for (unsigned i = 0; i < v.size(); ++i) s += v[i];
  return s;
}
int main() {
  Seq<Index> v;
  for (Index i = 0; i < 4; ++i) v.push_back(i * 3);
  std::printf("%d\n", total(v));
  return 0;
}
