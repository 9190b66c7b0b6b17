// SPDX-License-Identifier: Apache-2.0
//
// vlcsim - multi-user indoor visible light communication simulator
// Copyright (C) 2026 The vlcsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef VLC_ERROR_HPP
#define VLC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace vlc
{

// Raised for invalid configuration values and for inputs outside a model's domain.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error
{
  public:
    using Error::Error;
};

class ModelError : public Error
{
  public:
    using Error::Error;
};

} // namespace vlc

#endif
