// Copyright 2026 The camfail Authors. All Rights Reserved.
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
#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace camfail {

#ifdef CAMFAIL_VERSION_STRING
inline constexpr std::string_view kVersion = CAMFAIL_VERSION_STRING;
#else
inline constexpr std::string_view kVersion = "0.3.0";
#endif

// Base class of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied something invalid: an unknown preset, an out of range
// parameter, a malformed configuration. Maps to CLI exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Input data could not be read or decoded. Maps to CLI exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

namespace log {

using Sink = std::function<void(std::string_view)>;

namespace detail {
inline std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}
inline Sink& sink() {
  static Sink s;
  return s;
}
}  // namespace detail

// Replaces the warning sink. An empty sink restores stderr output.
inline void set_sink(Sink sink) {
  std::lock_guard lock(detail::sink_mutex());
  detail::sink() = std::move(sink);
}

inline void warn(std::string_view message) {
  std::lock_guard lock(detail::sink_mutex());
  if (detail::sink()) {
    detail::sink()(message);
  } else {
    std::cerr << "camfail: warning: " << message << '\n';
  }
}

}  // namespace log
}  // namespace camfail
