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
  int data[3] = {4, 5, 6};
  auto p = data;
  auto q = p + 2;
  auto diff = q - p;
  auto *r = &data[1];
  std::printf("%d %d %ld\n", *q, *r, static_cast<long>(diff));
  return 0;
}
