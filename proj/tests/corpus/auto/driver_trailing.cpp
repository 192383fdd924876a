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
auto square(int a) -> int { return a * a; }
auto half(double d) -> double { return d / 2; }
int main() {
  int inputs[4] = {0, 3, -2, 11};
  for (int i = 0; i < 4; ++i) {
    auto s = square(inputs[i]);
    auto h = half(s);
    std::printf("%d %d %.1f\n", inputs[i], s, h);
  }
  return 0;
}
