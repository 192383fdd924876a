# Copyright 2026 The Retrofit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""C++11 to C++03 source transformation with line traceability."""

from ._retrofit import (
    RetrofitError,
    check_syntax,
    find_features,
    run,
    stale,
    trace,
    transform_source,
)

__all__ = [
    "RetrofitError",
    "check_syntax",
    "find_features",
    "run",
    "stale",
    "trace",
    "transform_source",
]
