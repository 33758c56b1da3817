/* Copyright 2026 The fokusz Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef FOKUSZ_PARALLEL_HPP_
#define FOKUSZ_PARALLEL_HPP_

namespace fokusz {

// Selects between the OpenMP kernel and its serial reference. Both paths
// produce identical results; the serial one is kept for tests and benchmarks.
enum class Exec { kSerial, kParallel };

int max_threads();

}  // namespace fokusz

#endif  // FOKUSZ_PARALLEL_HPP_
