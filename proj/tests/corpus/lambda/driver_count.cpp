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
  int raw[8] = {1, 8, 2, 7, 3, 6, 4, 5};
  std::vector<int> v(raw, raw + 8);
  int limits[3] = {0, 4, 8};
  for (int i = 0; i < 3; ++i) {
    int limit = limits[i];
    long n = std::count_if(v.begin(), v.end(), [limit](int x) { return x > limit; });
    std::printf("%d:%ld\n", limit, n);
  }
  return 0;
}
