// Copyright 2026 The hdlkit Authors
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

#include <memory>

namespace hdlkit::vhdl {

class ClassConverter;
class EntityConverter;

// Hook tables shared by every instance of a kind of object.
std::shared_ptr<const ClassConverter> interface_converter();
std::shared_ptr<const ClassConverter> handler_converter();
std::shared_ptr<const ClassConverter> axi_sender_converter();
std::shared_ptr<const ClassConverter> axi_receiver_converter();
std::shared_ptr<const ClassConverter> data_converter();
std::shared_ptr<const EntityConverter> entity_converter();
std::shared_ptr<const EntityConverter> clock_generator_converter();

}  // namespace hdlkit::vhdl
