/*
 * Copyright 2026 The IRIS Fairness Authors.
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

#include "iris/log.hpp"

#include <iostream>
#include <mutex>

namespace iris {
namespace {

std::mutex& HandlerMutex() {
  static std::mutex mu;
  return mu;
}

WarningHandler& Handler() {
  static WarningHandler handler;
  return handler;
}

}  // namespace

WarningHandler SetWarningHandler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  WarningHandler previous = std::move(Handler());
  Handler() = std::move(handler);
  return previous;
}

void Warn(std::string_view message) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  if (Handler()) {
    Handler()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

ScopedWarningCapture::ScopedWarningCapture() {
  previous_ = SetWarningHandler(
      [this](std::string_view m) { messages_.emplace_back(m); });
}

ScopedWarningCapture::~ScopedWarningCapture() {
  SetWarningHandler(std::move(previous_));
}

bool ScopedWarningCapture::Contains(std::string_view needle) const {
  for (const auto& m : messages_) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace iris
