// Copyright 2026 The salvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SALVKIT_SHA256_HPP
#define SALVKIT_SHA256_HPP

#include <string>
#include <string_view>

namespace salv {

// Lowercase hex SHA-256 digest; used to fingerprint pipeline outputs.
std::string sha256_hex(std::string_view bytes);

}  // namespace salv

#endif  // SALVKIT_SHA256_HPP
