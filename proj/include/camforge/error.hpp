// Copyright 2026 The camforge Authors.
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

#ifndef CAMFORGE_ERROR_HPP_
#define CAMFORGE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace camforge {

/// Stable error codes. The string forms returned by to_string() are part of
/// the CLI contract and must not change.
enum class Errc {
  invalid_argument,
  out_of_range,
  dim_mismatch,
  non_finite,
  bad_magic,
  bad_version,
  bad_dtype,
  bad_ndim,
  length_mismatch,
  io_error,
  no_region,
  parse_error,
  unmatched_ids,
  divergence,
  degenerate_blob,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::out_of_range: return "out_of_range";
    case Errc::dim_mismatch: return "dim_mismatch";
    case Errc::non_finite: return "non_finite";
    case Errc::bad_magic: return "bad_magic";
    case Errc::bad_version: return "bad_version";
    case Errc::bad_dtype: return "bad_dtype";
    case Errc::bad_ndim: return "bad_ndim";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::io_error: return "io_error";
    case Errc::no_region: return "no_region";
    case Errc::parse_error: return "parse_error";
    case Errc::unmatched_ids: return "unmatched_ids";
    case Errc::divergence: return "divergence";
    case Errc::degenerate_blob: return "degenerate_blob";
  }
  return "unknown";
}

/// Library error carrying the originating module name and a stable code.
class Error : public std::runtime_error {
 public:
  Error(std::string_view module, Errc code, const std::string& message)
      : std::runtime_error(message), module_(module), code_(code) {}

  const std::string& module() const noexcept { return module_; }
  Errc code() const noexcept { return code_; }

 private:
  std::string module_;
  Errc code_;
};

namespace detail {

[[noreturn]] inline void fail(std::string_view module, Errc code,
                              const std::string& message) {
  throw Error(module, code, message);
}

}  // namespace detail
}  // namespace camforge

#endif  // CAMFORGE_ERROR_HPP_
