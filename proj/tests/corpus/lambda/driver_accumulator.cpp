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
int main() {
  int total = 0;
  int calls = 0;
  auto add = [&total, &calls](int x) { total += x; ++calls; };
  int inputs[5] = {3, 1, 4, 1, 5};
  for (int i = 0; i < 5; ++i) add(inputs[i]);
  std::printf("%d %d\n", total, calls);
  return 0;
}
