/*
 * Copyright 2026 The ppsf Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PPSF_ERRORS_HPP_
#define PPSF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ppsf {

/// A real value left the representable fixed-point domain.
class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

/// Two scaled ciphertexts with different scale exponents were combined.
/// Never silently rescaled; the caller's bookkeeping is wrong.
class ScaleMismatchError : public std::logic_error {
 public:
  explicit ScaleMismatchError(const std::string& what) : std::logic_error(what) {}
};

/// A protocol session cannot continue: out-of-order message, handshake
/// disagreement, corrupt intermediate value, or a deliberate abort.
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ppsf

#endif  // PPSF_ERRORS_HPP_
