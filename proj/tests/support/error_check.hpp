/*
 * Copyright 2026 The TwinForge Authors.
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

#pragma once

#include <string>

#include "doctest.h"

#include "twinforge/error.hpp"

// Asserts that `expr` throws twinforge::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected_code)                                 \
  do {                                                                        \
    bool thrown_ = false;                                                     \
    try {                                                                     \
      (void)(expr);                                                           \
    } catch (const ::twinforge::Error& e_) {                                  \
      thrown_ = true;                                                         \
      CHECK_MESSAGE(e_.code() == (expected_code), std::string(e_.what()));               \
    }                                                                         \
    CHECK_MESSAGE(thrown_, "expected an error from " #expr);                  \
  } while (false)
