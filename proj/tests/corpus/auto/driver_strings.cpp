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
#include <string>
int main() {
  const char* inputs[3] = {"alpha", "be", ""};
  for (int i = 0; i < 3; ++i) {
    auto s = std::string(inputs[i]);
    auto doubled = s + s;
    auto n = doubled.size();
    std::printf("[%s] %lu\n", doubled.c_str(), static_cast<unsigned long>(n));
  }
  return 0;
}
