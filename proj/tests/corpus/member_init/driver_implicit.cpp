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
struct Counter {
  int count = 10;
  int step { 2 };
  void tick() { count += step; }
};
int main() {
  Counter c;
  for (int i = 0; i < 3; ++i) c.tick();
  std::printf("%d %d\n", c.count, c.step);
  return 0;
}
