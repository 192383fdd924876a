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


void literals() {
  auto i = 42;
  auto d = 2.5;
  auto f = 1.5f;
  auto c = 'c';
  auto b = true;
  auto u = 7u;
  auto l = 9L;
  (void)i; (void)d; (void)f; (void)c; (void)b; (void)u; (void)l;
}
