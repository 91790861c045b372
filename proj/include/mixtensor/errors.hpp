/* Copyright 2026 The mixtensor Authors. All Rights Reserved.

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

#pragma once

#include <stdexcept>
#include <string>

namespace mixtensor {

// Raised when two values of different scalar kinds meet in one operation.
class KindMismatchError : public std::invalid_argument {
 public:
  explicit KindMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a dense materialization would exceed the configured entry budget.
class BudgetExceededError : public std::length_error {
 public:
  explicit BudgetExceededError(const std::string& what) : std::length_error(what) {}
};

// An internal consistency check failed. Always a bug, never a usage error.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mixtensor
