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


#include <vector>
template <class F>
void each(const std::vector<int>& v, F f) {
  for (unsigned i = 0; i < v.size(); ++i) f(v[i]);
}
int callback_param(const std::vector<int>& v) {
  int m = 0;
  each(v, [&m](int x) { if (x > m) m = x; });
  return m;
}
