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
  std::vector<int> v(6);
  int inc = 7;
  for (int i = 0; i < 6; ++i) v[i] = i;
  std::for_each(v.begin(), v.end(), [&inc](int &n) { n += inc; });
  for (int i = 0; i < 6; ++i) std::printf("%d ", v[i]);
  std::printf("\n");
  return 0;
}
