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

#include "hdlkit/classes.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "hdlkit/builder.hpp"
#include "hdlkit/error.hpp"
#include "hdlkit/session.hpp"

namespace hdlkit {

std::string_view to_string(Flow flow) { return flow == Flow::m2s ? "m2s" : "s2m"; }

Flow incoming_flow(HandlerRole role) {
  return role == HandlerRole::primary ? Flow::s2m : Flow::m2s;
}

int ClassDef::slot(std::string_view member) const {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].name == member) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> ClassDef::slots_with_flow(Flow flow) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].flow == flow) out.push_back(static_cast<int>(i));
  }
  return out;
}

const MemberFunction* SpecializationCache::find(const MemberKey& key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return e.fn.get();
  }
  return nullptr;
}

const MemberFunction& SpecializationCache::get_or_create(Session& session, const MemberKey& key) {
  if (const auto* hit = find(key)) return *hit;
  auto it = key.cls->functions.find(key.member);
  if (it == key.cls->functions.end()) {
    fail(ErrorKind::template_,
         fmt::format("class {} has no member function '{}'", key.cls->name, key.member));
  }
  for (const auto& k : in_progress_) {
    if (k == key) {
      fail(ErrorKind::template_,
           fmt::format("recursive specialization of {}.{}", key.cls->name, key.member));
    }
  }
  in_progress_.push_back(key);
  MemberFunction fn;
  try {
    fn = it->second(session, *key.cls, key.args);
  } catch (...) {
    in_progress_.pop_back();
    throw;
  }
  in_progress_.pop_back();
  fn.owner = key.cls;
  fn.member = key.member;
  fn.key = key.args;
  fn.ordinal = static_cast<unsigned>(std::count_if(entries_.begin(), entries_.end(), [&](const Entry& e) {
    return e.key.cls == key.cls && e.key.member == key.member;
  }));
  entries_.push_back({key, std::make_unique<MemberFunction>(std::move(fn))});
  return *entries_.back().fn;
}

std::vector<const MemberFunction*> SpecializationCache::for_class(const ClassDef* cls) const {
  std::vector<const MemberFunction*> out;
  for (const auto& e : entries_) {
    if (e.key.cls == cls) out.push_back(e.fn.get());
  }
  return out;
}

void install_port_view_functions(ClassDef& handler) {
  handler.functions["pull"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> args) {
    FunctionBuilder f(s, self, "pull", args, {"link"});
    Flow in = incoming_flow(self.role);
    f.param(0).link_side = std::string(to_string(in));
    auto& b = f.body();
    for (const auto& m : self.members) {
      if (!m.view || self.view->member(m.view_slot).flow != in) continue;
      b.drive(b.self_target(m.name), b.arg(0, self.view->member(m.view_slot).name));
    }
    if (self.has_function("_onPull")) b.call(b.self_object(), "_onPull");
    return f.finish();
  };
  handler.functions["push"] = [](Session& s, const ClassDef& self, std::span<const ArgKey> args) {
    FunctionBuilder f(s, self, "push", args, {"link"});
    Flow out = incoming_flow(self.role) == Flow::m2s ? Flow::s2m : Flow::m2s;
    f.param(0).link_side = std::string(to_string(out));
    f.param(0).dir = ParamDir::out;
    auto& b = f.body();
    if (self.has_function("_onPush")) b.call(b.self_object(), "_onPush");
    for (const auto& m : self.members) {
      if (!m.view || self.view->member(m.view_slot).flow != out) continue;
      b.drive(b.arg_target(0, self.view->member(m.view_slot).name), b.self(m.name));
    }
    return f.finish();
  };
}

}  // namespace hdlkit
