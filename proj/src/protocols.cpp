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

#include "hdlkit/protocols.hpp"

#include "hdlkit/builder.hpp"
#include "hdlkit/entity.hpp"
#include "hdlkit/error.hpp"
#include "hdlkit/vhdl/converters.hpp"

namespace hdlkit::protocols {

namespace {

MemberSpec port_member(std::string name, Type type, Flow flow) {
  MemberSpec m;
  m.name = std::move(name);
  m.init = Value::initial(type);
  m.type = std::move(type);
  m.storage = MemberStorage::inherit;
  m.flow = flow;
  return m;
}

MemberSpec variable(std::string name, Type type) {
  MemberSpec m;
  m.name = std::move(name);
  m.init = Value::zero(type);
  m.type = std::move(type);
  m.storage = MemberStorage::variable;
  return m;
}

/// Mirrors every member of `view` into variables named <prefix>_<member>.
void add_view(ClassDef& handler, const ClassDef& view, const std::string& prefix) {
  handler.view = &view;
  handler.view_prefix = prefix;
  for (std::size_t i = 0; i < view.members.size(); ++i) {
    MemberSpec m = variable(prefix + "_" + view.members[i].name, view.members[i].type);
    m.view = true;
    m.view_slot = static_cast<int>(i);
    handler.members.push_back(std::move(m));
  }
  install_port_view_functions(handler);
}

Expr is_one(const Expr& e) { return e == 1; }
Expr is_zero(const Expr& e) { return e == 0; }

}  // namespace

const ClassTemplate& axi_stream_template() {
  static const ClassTemplate t{"axiStream", 1, [](Session&, std::span<const Type> args) {
    ClassDef c;
    c.kind = ClassKind::interface;
    c.members.push_back(port_member("valid", Type::logic(), Flow::m2s));
    c.members.push_back(port_member("last", Type::logic(), Flow::m2s));
    c.members.push_back(port_member("data", args[0], Flow::m2s));
    c.members.push_back(port_member("ready", Type::logic(), Flow::s2m));
    c.data_type = args[0];
    c.primary_handler = [](Session& s, const ClassDef& iface) -> const ClassDef& {
      return axis_sender(s, *iface.data_type);
    };
    c.secondary_handler = [](Session& s, const ClassDef& iface) -> const ClassDef& {
      return axis_receiver(s, *iface.data_type);
    };
    c.converter = vhdl::interface_converter();
    return c;
  }};
  return t;
}

const ClassTemplate& axis_sender_template() {
  static const ClassTemplate t{"axisStream_sender", 1, [](Session& s, std::span<const Type> args) {
    ClassDef c;
    c.kind = ClassKind::handler;
    c.role = HandlerRole::primary;
    add_view(c, axi_stream(s, args[0]), "tx");
    c.data_type = args[0];
    c.assign_fn = "send_data";
    c.truthy_fn = "ready_to_send";
    c.functions["_onPull"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      FunctionBuilder f(s, self, "_onPull", a, {});
      auto& b = f.body();
      b.if_(is_one(b.self("tx_ready")), [&] {
        b.drive(b.self_target("tx_valid"), 0);
        b.drive(b.self_target("tx_last"), 0);
      });
      return f.finish();
    };
    c.functions["ready_to_send"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      FunctionBuilder f(s, self, "ready_to_send", a, {});
      f.set_result(is_zero(f.body().self("tx_valid")));
      return f.finish();
    };
    c.functions["send_data"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      std::vector<std::string> names{"dataIn"};
      if (a.size() == 2) names.push_back("lastIn");
      FunctionBuilder f(s, self, "send_data", a, names);
      auto& b = f.body();
      b.drive(b.self_target("tx_valid"), 1);
      b.drive(b.self_target("tx_data"), b.arg(0));
      if (a.size() == 2) {
        b.drive(b.self_target("tx_last"), b.arg(1));
      } else {
        b.drive(b.self_target("tx_last"), 0);
      }
      return f.finish();
    };
    c.converter = vhdl::axi_sender_converter();
    return c;
  }};
  return t;
}

const ClassTemplate& axis_receiver_template() {
  static const ClassTemplate t{"axisStream_receiver", 1, [](Session& s, std::span<const Type> args) {
    ClassDef c;
    c.kind = ClassKind::handler;
    c.role = HandlerRole::secondary;
    add_view(c, axi_stream(s, args[0]), "rx");
    c.members.push_back(variable("data_internal2", args[0]));
    c.members.push_back(variable("last_internal2", Type::logic()));
    c.members.push_back(variable("isvalid2", Type::logic()));
    c.members.push_back(variable("was_read2", Type::logic()));
    c.data_type = args[0];
    c.value_fn = "read_data";
    c.stream_out_fn = "read_data";
    c.truthy_fn = "data_available";
    c.functions["_onPull"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      FunctionBuilder f(s, self, "_onPull", a, {});
      auto& b = f.body();
      b.if_(b.self("rx_valid") && b.self("rx_ready"), [&] {
        b.drive(b.self_target("data_internal2"), b.self("rx_data"));
        b.drive(b.self_target("last_internal2"), b.self("rx_last"));
        b.drive(b.self_target("isvalid2"), 1);
        b.drive(b.self_target("was_read2"), 0);
      });
      return f.finish();
    };
    c.functions["_onPush"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      FunctionBuilder f(s, self, "_onPush", a, {});
      auto& b = f.body();
      b.if_(is_one(b.self("was_read2")), [&] {
        b.drive(b.self_target("isvalid2"), 0);
        b.drive(b.self_target("was_read2"), 0);
      });
      b.drive(b.self_target("rx_ready"), !b.self("isvalid2"));
      return f.finish();
    };
    c.functions["data_available"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      FunctionBuilder f(s, self, "data_available", a, {});
      auto& b = f.body();
      f.set_result(is_one(b.self("isvalid2")) && is_zero(b.self("was_read2")));
      return f.finish();
    };
    c.functions["read_data"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      FunctionBuilder f(s, self, "read_data", a, {"data"});
      f.param(0).dir = a.size() == 1 && a[0].cls ? ParamDir::inout : ParamDir::out;
      auto& b = f.body();
      b.reset(b.arg_target(0));
      // Every read in the activation sees the buffered word; _onPush frees it.
      b.if_(is_one(b.self("isvalid2")), [&] {
        b.drive(b.arg_target(0), b.self("data_internal2"));
        b.drive(b.self_target("was_read2"), 1);
      });
      return f.finish();
    };
    c.converter = vhdl::axi_receiver_converter();
    return c;
  }};
  return t;
}

const ClassTemplate& native_fifo_template() {
  static const ClassTemplate t{"NativeFifoOut", 1, [](Session&, std::span<const Type> args) {
    ClassDef c;
    c.kind = ClassKind::interface;
    c.members.push_back(port_member("data", args[0], Flow::m2s));
    c.members.push_back(port_member("empty", Type::logic(), Flow::m2s));
    c.members.push_back(port_member("enable", Type::logic(), Flow::s2m));
    c.data_type = args[0];
    c.secondary_handler = [](Session& s, const ClassDef& iface) -> const ClassDef& {
      return native_fifo_reader(s, *iface.data_type);
    };
    c.converter = vhdl::interface_converter();
    return c;
  }};
  return t;
}

const ClassTemplate& native_fifo_reader_template() {
  static const ClassTemplate t{"NativeFIFO_in", 1, [](Session& s, std::span<const Type> args) {
    ClassDef c;
    c.kind = ClassKind::handler;
    c.role = HandlerRole::secondary;
    add_view(c, native_fifo(s, args[0]), "rx");
    c.members.push_back(variable("skip", Type::logic()));
    c.data_type = args[0];
    c.value_fn = "read_data";
    c.stream_out_fn = "read_data";
    c.truthy_fn = "data_available";
    c.functions["_onPull"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      FunctionBuilder f(s, self, "_onPull", a, {});
      auto& b = f.body();
      // A request granted at this edge consumed the word still visible on data.
      b.drive(b.self_target("skip"), 0);
      b.if_(is_one(b.self("rx_enable")) && is_zero(b.self("rx_empty")),
            [&] { b.drive(b.self_target("skip"), 1); });
      b.drive(b.self_target("rx_enable"), 0);
      return f.finish();
    };
    c.functions["data_available"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      FunctionBuilder f(s, self, "data_available", a, {});
      auto& b = f.body();
      f.set_result(is_zero(b.self("rx_empty")) && is_zero(b.self("skip")));
      return f.finish();
    };
    c.functions["read_data"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> a) {
      FunctionBuilder f(s, self, "read_data", a, {"data"});
      f.param(0).dir = a.size() == 1 && a[0].cls ? ParamDir::inout : ParamDir::out;
      auto& b = f.body();
      b.reset(b.arg_target(0));
      b.if_(is_zero(b.self("rx_empty")) && is_zero(b.self("skip")), [&] {
        b.drive(b.arg_target(0), b.self("rx_data"));
        b.drive(b.self_target("rx_enable"), 1);
        b.drive(b.self_target("skip"), 1);
      });
      return f.finish();
    };
    c.on_bind = [](Architecture& arch, ObjectId handler, ObjectId port) -> ObjectId {
      Session& s = arch.session();
      Design& d = s.design();
      const ClassDef& iface = *d.object(port).cls;
      std::string hname = d.object(handler).requested_name;
      Object rx2 = arch.bundle("rx2", iface, true);
      d.object(rx2.id()).parent_handler = handler;
      arch.connect(rx2, Object(&s, port));
      Object rx1 = arch.bundle("rx1", iface, true);
      d.object(rx1.id()).parent_handler = handler;
      d.object(handler).bundles = {rx2.id(), rx1.id()};
      ProcessId pid = arch.combinational(hname + "_gate", [&](ProcessBuilder& p) {
        p.drive(rx2.member("enable"),
                v_switch(0, {v_case(rx2.member("empty") == 0, rx1.member("enable"))}));
        p.drive(rx1.member("empty"), rx2.member("empty"));
        p.drive(rx1.member("data"), rx2.member("data"));
      });
      d.process(pid).installed_by = handler;
      return rx1.id();
    };
    c.converter = vhdl::handler_converter();
    return c;
  }};
  return t;
}

const ClassTemplate& optional_template() {
  static const ClassTemplate t{"optional_t", 1, [](Session&, std::span<const Type> args) {
    ClassDef c;
    c.kind = ClassKind::data;
    MemberSpec data;
    data.name = "data";
    data.type = args[0];
    data.init = Value::zero(args[0]);
    MemberSpec valid;
    valid.name = "valid";
    valid.type = Type::logic();
    valid.init = Value::zero(Type::logic());
    c.members = {data, valid};
    c.data_type = args[0];
    c.reset_hook = [](BlockBuilder& b, const ObjRef& self, const ClassDef& cls) {
      b.drive(b.leaf_target(self, cls, "valid"), 0);
    };
    c.assign_hook = [](BlockBuilder& b, const ObjRef& self, const ClassDef& cls,
                       const Expr& value) {
      b.drive(b.leaf_target(self, cls, "data"), value);
      b.drive(b.leaf_target(self, cls, "valid"), 1);
    };
    c.converter = vhdl::data_converter();
    return c;
  }};
  return t;
}

const ClassDef& axi_stream(Session& s, const Type& data) {
  return s.monomorphize(axi_stream_template(), {data});
}
const ClassDef& axis_sender(Session& s, const Type& data) {
  return s.monomorphize(axis_sender_template(), {data});
}
const ClassDef& axis_receiver(Session& s, const Type& data) {
  return s.monomorphize(axis_receiver_template(), {data});
}
const ClassDef& native_fifo(Session& s, const Type& data) {
  return s.monomorphize(native_fifo_template(), {data});
}
const ClassDef& native_fifo_reader(Session& s, const Type& data) {
  return s.monomorphize(native_fifo_reader_template(), {data});
}
const ClassDef& optional(Session& s, const Type& data) {
  return s.monomorphize(optional_template(), {data});
}

}  // namespace hdlkit::protocols
