// Copyright 2026 The SentiLens Authors.
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

#ifndef SENTILENS_PORTER_STEMMER_HPP
#define SENTILENS_PORTER_STEMMER_HPP

#include <string>
#include <string_view>

namespace sentilens {

/// Porter (1980) suffix stripper, in the revision distributed by its author
/// (includes the "bli" -> "ble" and "logi" -> "log" departures). Input is
/// expected to be lowercase ASCII; words of length <= 2 are returned as is.
std::string porter_stem(std::string_view word);

}  // namespace sentilens

#endif  // SENTILENS_PORTER_STEMMER_HPP
