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

#include "hdlkit/classes.hpp"
#include "hdlkit/session.hpp"

namespace hdlkit::protocols {

// Generic class templates (one type argument: the payload type).
const ClassTemplate& axi_stream_template();
const ClassTemplate& axis_sender_template();
const ClassTemplate& axis_receiver_template();
const ClassTemplate& native_fifo_template();
const ClassTemplate& native_fifo_reader_template();
const ClassTemplate& optional_template();

/// AXI4-Stream interface: valid, last, data (primary to secondary), ready back.
const ClassDef& axi_stream(Session& s, const Type& data);
/// Primary-side handler: send_data, ready_to_send, _onPull.
const ClassDef& axis_sender(Session& s, const Type& data);
/// Secondary-side handler with a one-word buffer: read_data, data_available.
const ClassDef& axis_receiver(Session& s, const Type& data);
/// Native FIFO read port: data and empty from the FIFO, enable back to it.
const ClassDef& native_fifo(Session& s, const Type& data);
const ClassDef& native_fifo_reader(Session& s, const Type& data);
/// Data container with a valid bit; reset clears only valid.
const ClassDef& optional(Session& s, const Type& data);

}  // namespace hdlkit::protocols
