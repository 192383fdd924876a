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


#include <algorithm>
#include <cstdio>
#include <vector>
int main() {
  int raw[7] = {5, -1, 9, 3, 3, 0, 12};
  std::vector<int> v(raw, raw + 7);
  std::sort(v.begin(), v.end(), [](int a, int b) { return a > b; });
  for (unsigned i = 0; i < v.size(); ++i) std::printf("%d ", v[i]);
  std::printf("\n");
  return 0;
}
