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
  std::string sep = "-";
  auto join = [&sep](const std::string& a, const std::string& b) { return a + sep + b; };
  const char* left[3] = {"a", "bb", ""};
  const char* right[3] = {"x", "", "zz"};
  for (int i = 0; i < 3; ++i) std::printf("%s\n", join(left[i], right[i]).c_str());
  return 0;
}
