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


template <class T>
struct Box {
  T value;
  T get() const { return value; }
};
template <class T>
Box<T> boxed(T v) { Box<T> b; b.value = v; return b; }
int template_instance() {
  auto b = boxed(2);
  auto v = b.get();
  auto d = boxed(1.5).get();
  return v + static_cast<int>(d);
}
