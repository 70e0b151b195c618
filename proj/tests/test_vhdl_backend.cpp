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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "hdlkit/designs.hpp"
#include "hdlkit/protocols.hpp"
#include "hdlkit/vhdl/converter.hpp"
#include "support.hpp"
#include "vhdl_check.hpp"

using namespace hdlkit;
using namespace hdlkit::designs;
using namespace hdlkit::vhdl;
using test::error_kind;
using test::Fixture;

namespace fs = std::filesystem;

namespace {

ConversionResult convert(Session& s, Entity& top) { return Converter(s, top.id()).run(); }

ConversionResult convert_design(Session& s, const std::string& name) {
  const auto* info = find_design(name);
  REQUIRE(info != nullptr);
  Entity& top = info->make(s, {});
  return convert(s, top);
}

const VhdlDocument* find_doc(const ConversionResult& r, const std::string& file) {
  for (const auto& d : r.documents) {
    if (d.file == file) return &d;
  }
  return nullptr;
}

std::string doc_text(const ConversionResult& r, const std::string& file) {
  const auto* d = find_doc(r, file);
  REQUIRE_MESSAGE(d != nullptr, file);
  return d->render();
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> corpus = {"my_first_test_bench", "counter_tb", "input_delay",
                                         "stream_delay_one",    "fifo_reader", "optional_tb"};

}  // namespace

TEST_CASE("legalize") {
  CHECK(legalize("counter") == "counter");
  CHECK(legalize("In") == "In_r");
  CHECK(legalize("out") == "out_r");
  CHECK(legalize("_onPull") == "onPull");
  CHECK(legalize("a__b") == "a_b");
  CHECK(legalize("tail_") == "tail");
  CHECK(legalize("1x") == "n_1x");
  CHECK(legalize("process") == "process_r");
  CHECK(is_reserved("SIGNAL"));
  CHECK_FALSE(is_reserved("counter"));
  for (std::string bad : {"", "_a", "a_", "a__b", "9a", "a-b", "entity"}) {
    CAPTURE(bad);
    CHECK_FALSE(is_legal_identifier(bad));
  }
  for (std::string raw : {"x", "_x", "__x__", "x__y", "0", "in", "Buffer", "a.b", "my-name"}) {
    CAPTURE(raw);
    CHECK(is_legal_identifier(legalize(raw)));
  }
}

TEST_CASE("type marks and literals") {
  CHECK(type_mark(Type::logic()) == "std_logic");
  CHECK(type_mark(Type::vector(32)) == "std_logic_vector(31 downto 0)");
  CHECK(type_mark(Type::boolean()) == "boolean");
  CHECK(literal(Value::logic(Logic::one)) == "'1'");
  CHECK(literal(Value::logic(Logic::zero)) == "'0'");
  CHECK(literal(Value::vector(8, 0)) == "(others => '0')");
  CHECK(literal(Value::vector(32, 300)) == "std_logic_vector(to_unsigned(300, 32))");
  // Wider than 31 bits: bit-string literal.
  CHECK(literal(Value::vector(40, 1ull << 35)) == "\"0000100000000000000000000000000000000000\"");
}

TEST_CASE("VhdlDocument assembles blocks in fixed order") {
  VhdlDocument d;
  d.kind = "package";
  d.unit = "p";
  d.add(Section::package_body, "body");
  d.add(Section::libraries, "libs");
  d.add(Section::entity_declaration, "entity");
  d.add(Section::package_declaration, "pkg");
  auto text = d.render();
  CHECK(text.find("entity") == std::string::npos);  // entity blocks are not part of a package
  CHECK(text.find("libs\n\npackage p is\npkg\nend package p;\n\npackage body p is\nbody\nend package body p;\n") == 0);
}

TEST_CASE("collect: instantiated objects only, in registration order") {
  Session s;
  protocols::axi_stream(s, Type::vector(8));  // defined, never instantiated
  auto& tb = s.make_top<CounterTb>("tb");
  auto r = convert(s, tb);
  CHECK(r.queue == std::vector<std::string>{"tb", "tb/clkgen", "tb/cnt", "axiStream_32",
                                            "axisStream_sender_32", "tb/axPrint",
                                            "axisStream_receiver_32"});
  CHECK(find_doc(r, "axiStream_8_pkg.vhd") == nullptr);
  std::set<std::string> files;
  for (const auto& d : r.documents) files.insert(d.file);
  CHECK(files == std::set<std::string>{"tb.vhd", "clk_generator.vhd", "Counter.vhd",
                                       "axiStream_32_pkg.vhd", "axisStream_sender_32_pkg.vhd",
                                       "AxiPrint.vhd", "axisStream_receiver_32_pkg.vhd"});
}

TEST_CASE("lower_assignment") {
  Session s;
  auto r = convert_design(s, "my_first_test_bench");
  CHECK(r.passes == 1);
  auto text = doc_text(r, "my_first_test_bench.vhd");
  CHECK(contains(text, "counter <= std_logic_vector(unsigned(counter) + 1);"));
  CHECK(contains(text, "if unsigned(counter) >= unsigned(max_cnt) then"));
  CHECK(contains(text, "counter <= (others => '0');"));
  CHECK(contains(text, "signal max_cnt : std_logic_vector(31 downto 0) := std_logic_vector(to_unsigned(300, 32));"));
  CHECK(contains(text, "if rising_edge(clkgen_clk) then"));

  Session s2;
  auto& top = s2.make_top<Fixture>("top", [&](Fixture&, Architecture& a) {
    auto& clkgen = a.instantiate<ClockGenerator>("clkgen");
    auto out = a.vector("out_value", 8);
    a.on_rising_edge(clkgen.clk, "proc", [&](ProcessBuilder& p) {
      auto buff = p.variable("buff", Type::vector(8));
      p.drive(buff, 0);
      p.drive(buff, buff + 3);
      p.drive(out, buff);
    });
  });
  auto text2 = doc_text(convert(s2, top), "fixture.vhd");
  CHECK(contains(text2, "variable buff : std_logic_vector(7 downto 0) := (others => '0');"));
  CHECK(contains(text2, "buff := (others => '0');"));
  CHECK(contains(text2, "buff := std_logic_vector(unsigned(buff) + 3);"));
  CHECK(contains(text2, "out_value <= buff;"));
}

TEST_CASE("AXI receiver getValue declares one buffer and reads before the statement") {
  Session s;
  auto r = convert_design(s, "stream_delay_one");
  CHECK(r.passes == 2);
  auto text = doc_text(r, "stream_delay_one.vhd");
  CHECK(count(text, "variable axiSalve_buff : std_logic_vector(31 downto 0)") == 1);
  auto read = text.find("read_data(axiSalve, axiSalve_buff);");
  auto send = text.find("send_data(axPrimary, axiSalve_buff);");
  REQUIRE(read != std::string::npos);
  REQUIRE(send != std::string::npos);
  CHECK(read < send);

  // Second use in the same process reuses the buffer.
  Session s2;
  auto& top = s2.make_top<Fixture>("top", [&](Fixture&, Architecture& a) {
    auto& clkgen = a.instantiate<ClockGenerator>("clkgen");
    auto& cnt = a.instantiate<Counter>("cnt", clkgen.clk);
    auto data_out = a.get_handle(cnt.Dout, "data_out");
    auto x = a.vector("x", 32);
    auto y = a.vector("y", 32);
    a.on_rising_edge(clkgen.clk, "proc", [&](ProcessBuilder& p) {
      p.drive(x, data_out);
      p.drive(y, data_out);
    });
  });
  auto text2 = doc_text(convert(s2, top), "fixture.vhd");
  CHECK(count(text2, "variable data_out_buff") == 1);
  CHECK(count(text2, "read_data(data_out, data_out_buff);") == 2);
}

TEST_CASE("AXI sender reassign becomes send_data") {
  Session s;
  auto r = convert_design(s, "counter_tb");
  CHECK(r.passes == 2);
  auto text = doc_text(r, "Counter.vhd");
  CHECK(contains(text, "send_data(data_out, data);"));
  CHECK(contains(text, "if ready_to_send(data_out) then"));
  for (const auto& d : r.documents) CHECK_FALSE(contains(d.render(), "$$missing_template$$"));
}

TEST_CASE("lower_class") {
  Session s;
  auto r = convert_design(s, "counter_tb");
  auto sender = doc_text(r, "axisStream_sender_32_pkg.vhd");
  // Only variables: the signal record is elided.
  CHECK_FALSE(contains(sender, "axisStream_sender_32_sig"));
  CHECK(contains(sender, "type axisStream_sender_32_var is record"));
  CHECK(contains(sender, "procedure send_data(self : inout axisStream_sender_32_var; "
                         "dataIn : in std_logic_vector(31 downto 0));"));
  CHECK(contains(sender, "function ready_to_send(self : axisStream_sender_32_var) return boolean;"));
  CHECK(contains(sender, "procedure onPull(self : inout axisStream_sender_32_var);"));

  auto iface = doc_text(r, "axiStream_32_pkg.vhd");
  CHECK(contains(iface, "type axiStream_32_m2s is record"));
  CHECK(contains(iface, "type axiStream_32_s2m is record"));

  // Hand-built handler with all three storage kinds.
  ClassDef mixed;
  mixed.name = "mixed";
  mixed.kind = ClassKind::handler;
  auto member = [](std::string n, MemberStorage st) {
    MemberSpec m;
    m.name = std::move(n);
    m.type = Type::logic();
    m.init = Value::logic(Logic::zero);
    m.storage = st;
    return m;
  };
  mixed.members = {member("sig_a", MemberStorage::signal), member("var_b", MemberStorage::variable),
                   member("free_c", MemberStorage::free_type), member("sig_d", MemberStorage::signal)};
  Session s2;
  auto& top = s2.make_top<MyFirstTestBench>("t");
  Converter conv(s2, top.id());
  VhdlDocument doc;
  doc.kind = "package";
  doc.unit = Converter::package_name(mixed);
  handler_converter()->emit_package(conv, mixed, doc);
  auto text = doc.render();
  CHECK(contains(text, "type mixed_sig is record\n        sig_a : std_logic;\n        sig_d : std_logic;\n"));
  CHECK(contains(text, "type mixed_var is record\n        var_b : std_logic;\n"));
  CHECK_FALSE(contains(text, "free_c"));
}

TEST_CASE("lower_entity: m2s/s2m ports with the secondary flipped") {
  Session s;
  auto r = convert_design(s, "counter_tb");
  auto counter = doc_text(r, "Counter.vhd");
  CHECK(contains(counter, "Dout_m2s : out axiStream_32_m2s;"));
  CHECK(contains(counter, "Dout_s2m : in axiStream_32_s2m"));
  auto print = doc_text(r, "AxiPrint.vhd");
  CHECK(contains(print, "D_in_m2s : in axiStream_32_m2s;"));
  CHECK(contains(print, "D_in_s2m : out axiStream_32_s2m"));
  auto tb = doc_text(r, "tb.vhd");
  CHECK(contains(tb, "signal cnt_Dout_m2s : axiStream_32_m2s;"));
  CHECK(contains(tb, "D_in_m2s => cnt_Dout_m2s,"));
}

TEST_CASE("combinational v_switch lowers to a conditional assignment") {
  Session s;
  auto r = convert_design(s, "fifo_reader");
  auto text = doc_text(r, "FifoReader.vhd");
  CHECK(contains(text, "rx_rx2_s2m.enable <= rx_rx1_s2m.enable when rx_rx2_m2s.empty = '0' else '0';"));
  // The free_type bundles are architecture signals, not handler record members.
  auto pkg = doc_text(r, "NativeFIFO_in_32_pkg.vhd");
  CHECK_FALSE(contains(pkg, "rx2"));
}

TEST_CASE("identical instances share one file") {
  Session s;
  auto r = convert_design(s, "input_delay");
  const auto* d = find_doc(r, "stream_delay_one.vhd");
  REQUIRE(d != nullptr);
  CHECK(d->sources == std::vector<std::string>{"InputDelay/delay", "InputDelay/delay_1"});
  auto text = doc_text(r, "InputDelay.vhd");
  CHECK(contains(text, "delay : entity work.stream_delay_one"));
  CHECK(contains(text, "delay_1 : entity work.stream_delay_one"));
}

TEST_CASE("an unsatisfiable template stops with no-progress") {
  Session s;
  auto& tb = s.make_top<CounterTb>("tb");
  // Reject every send_data specialization for HDL emission. The class is
  // owned (non-const) by the session, so casting away const is sound.
  auto& sender = const_cast<ClassDef&>(protocols::axis_sender(s, Type::vector(32)));
  sender.hdl_supported = [](const MemberFunction& f) { return f.member != "send_data"; };
  try {
    convert(s, tb);
    FAIL("expected no-progress");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_progress);
    CHECK(contains(e.what(), "axisStream_sender_32.send_data("));
  }
}

TEST_CASE("simulation-only entities are rejected") {
  Session s;
  auto& tb = s.make_top<FifoTb>("fifo_tb", 0);
  CHECK(error_kind([&] { convert(s, tb); }) == ErrorKind::grammar);
}

TEST_CASE("corpus: pass bound, structure, determinism, goldens") {
  const fs::path golden_root = fs::path(HDLKIT_SOURCE_DIR) / "tests" / "golden";
  for (const auto& name : corpus) {
    CAPTURE(name);
    Session s1, s2;
    auto r1 = convert_design(s1, name);
    auto r2 = convert_design(s2, name);
    CHECK(r1.passes <= 3);
    REQUIRE(r1.documents.size() == r2.documents.size());
    for (std::size_t i = 0; i < r1.documents.size(); ++i) {
      CHECK(r1.documents[i].file == r2.documents[i].file);
      CHECK(r1.documents[i].render() == r2.documents[i].render());
    }
    CHECK(r1.manifest().dump(2) == r2.manifest().dump(2));

    test::StructureReport report;
    for (const auto& d : r1.documents) test::check_document_text(d.file, d.render(), report);
    test::check_design_structure(s1, r1, report);
    for (const auto& v : report.violations) FAIL_CHECK(v);
    CHECK(report.signal_assignments + report.variable_assignments > 0);
    if (name != "my_first_test_bench") CHECK(report.port_pairs > 0);

    fs::path dir = golden_root / name;
    REQUIRE_MESSAGE(fs::exists(dir), dir.string());
    std::set<std::string> golden_files;
    for (const auto& entry : fs::directory_iterator(dir)) golden_files.insert(entry.path().filename());
    std::set<std::string> emitted = {"manifest.json"};
    for (const auto& d : r1.documents) {
      emitted.insert(d.file);
      CHECK_MESSAGE(read_file(dir / d.file) == d.render(), d.file);
    }
    CHECK(golden_files == emitted);
    CHECK(read_file(dir / "manifest.json") == r1.manifest().dump(2) + "\n");
  }
}

TEST_CASE("write_output writes documents and the manifest") {
  Session s;
  auto r = convert_design(s, "counter_tb");
  fs::path dir = fs::temp_directory_path() / "hdlkit_write_output_test";
  fs::remove_all(dir);
  write_output(r, dir.string());
  CHECK(fs::exists(dir / "manifest.json"));
  for (const auto& d : r.documents) CHECK(read_file(dir / d.file) == d.render());
  auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  CHECK(manifest["top"] == "tb");
  CHECK(manifest["passes"] == 2);
  CHECK(manifest["files"].size() == r.documents.size());
  CHECK(manifest["files"][0]["file"] == "tb.vhd");
  CHECK(manifest["files"][0]["kind"] == "entity");
  fs::remove_all(dir);
}
