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

#include <fmt/format.h>

#include "hdlkit/error.hpp"
#include "hdlkit/vhdl/converter.hpp"
#include "hdlkit/vhdl/converters.hpp"

namespace hdlkit::vhdl {

namespace {

class InterfaceConverter : public ClassConverter {};
class HandlerConverter : public ClassConverter {};
class DataConverter : public ClassConverter {};

/// handler << value becomes a call of the assignment member.
class AxiSenderConverter : public HandlerConverter {
 public:
  std::string reassign(VisitorContext& ctx, const Drive& d, const std::string& rhs) const override {
    if (!d.target.is_object() || !d.assign_fn) return ClassConverter::reassign(ctx, d, rhs);
    auto call = ctx.call_member_func(*d.assign_fn, d.target.object(), {rhs});
    if (!call) return "$$missing_template$$";
    return *call + ";";
  }
};

/// value << handler reads into a process buffer <handler>_buff first.
class AxiReceiverConverter : public HandlerConverter {
 public:
  std::string get_value(VisitorContext& ctx, const Drive& d) const override {
    if (!d.source.is_object() || !d.value_fn) return ClassConverter::get_value(ctx, d);
    std::string buff = ctx.object_name(d.source.object()) + "_buff";
    if (!ctx.try_get_variable(buff)) {
      ctx.add_local({buff, type_mark(d.value_type), literal(Value::zero(d.value_type))});
    }
    auto call = ctx.call_member_func(*d.value_fn, d.source.object(), {buff});
    if (!call) return buff;
    ctx.add_statement_before(*call + ";");
    return buff;
  }
};

class ClockGeneratorConverter : public EntityConverter {
 public:
  bool emit(Converter& conv, EntityId entity, const std::string& unit, VhdlDocument& doc) const override {
    const Design& d = conv.design();
    const auto& rec = d.entity(entity);
    if (!rec.clock_source) fail(ErrorKind::elaboration, rec.path + " has no clock source");
    std::string clk = legalize(d.node(rec.clock_source->node).hdl_name);
    unsigned half = rec.clock_source->period / 2;
    doc.add(Section::libraries, "library ieee;\nuse ieee.std_logic_1164.all;");
    doc.add(Section::entity_declaration,
            fmt::format("entity {} is\n    port (\n        {} : out std_logic\n    );\nend entity {};",
                        unit, clk, unit));
    doc.add(Section::architecture_declarations, fmt::format("    signal {}_i : std_logic := '0';", clk));
    doc.add(Section::architecture_body,
            fmt::format("    {0}_i <= not {0}_i after {1} ns;\n    {0} <= {0}_i;", clk, half == 0 ? 1 : half));
    return false;
  }
};

}  // namespace

std::shared_ptr<const ClassConverter> interface_converter() {
  static const auto c = std::make_shared<const InterfaceConverter>();
  return c;
}
std::shared_ptr<const ClassConverter> handler_converter() {
  static const auto c = std::make_shared<const HandlerConverter>();
  return c;
}
std::shared_ptr<const ClassConverter> axi_sender_converter() {
  static const auto c = std::make_shared<const AxiSenderConverter>();
  return c;
}
std::shared_ptr<const ClassConverter> axi_receiver_converter() {
  static const auto c = std::make_shared<const AxiReceiverConverter>();
  return c;
}
std::shared_ptr<const ClassConverter> data_converter() {
  static const auto c = std::make_shared<const DataConverter>();
  return c;
}
std::shared_ptr<const EntityConverter> entity_converter() {
  static const auto c = std::make_shared<const EntityConverter>();
  return c;
}
std::shared_ptr<const EntityConverter> clock_generator_converter() {
  static const auto c = std::make_shared<const ClockGeneratorConverter>();
  return c;
}

}  // namespace hdlkit::vhdl
