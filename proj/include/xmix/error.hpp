// Copyright 2026 The expertmix Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XMIX_ERROR_HPP_
#define XMIX_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace xmix {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (graph files, configs, checkpoints).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A named input file or directory does not exist.
class NotFoundError : public FormatError {
 public:
  using FormatError::FormatError;
};

// A caller broke an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A numerical quantity became NaN or infinite.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace xmix

#endif  // XMIX_ERROR_HPP_
