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


struct Point {
  int x;
  int y;
  Point offset(int d) const { Point p = *this; p.x += d; return p; }
};
int user_struct() {
  Point a = {1, 2};
  auto b = a.offset(3);
  auto px = b.x;
  auto *pa = &a;
  return px + pa->y;
}
