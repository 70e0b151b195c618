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

#include "hdlkit/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "hdlkit/cosim.hpp"
#include "hdlkit/designs.hpp"
#include "hdlkit/graph.hpp"
#include "hdlkit/simulator.hpp"
#include "hdlkit/vhdl/converter.hpp"

namespace hdlkit::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(const std::string& v, const std::string& where) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    fail(ErrorKind::config, fmt::format("{}: '{}' is not a non-negative integer", where, v));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) fail(ErrorKind::io, "cannot write " + path.string());
}

const designs::DesignInfo& find_top(const std::string& top) {
  if (top.empty()) fail(ErrorKind::config, "no top design given (--top or 'top' in the config file)");
  const auto* info = designs::find_design(top);
  if (!info) {
    std::string names;
    for (const auto& d : designs::registry()) names += (names.empty() ? "" : ", ") + d.name;
    fail(ErrorKind::elaboration, fmt::format("unknown top design '{}' (known: {})", top, names));
  }
  return *info;
}

struct Flags {
  std::string config;
  std::optional<std::string> top;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> cycles;
  std::optional<std::string> vcd;
  std::vector<std::string> trace;
  std::optional<std::uint64_t> seed;
  std::string report;
  std::string engine = "compiled";
  bool trace_variables = false;
  std::optional<std::uint16_t> cosim_port;
  std::string format = "dot";
  std::string output;
};

ProjectConfig merged(const Flags& f) {
  ProjectConfig c;
  std::string path = f.config;
  if (path.empty()) {
    if (const char* env = std::getenv("HDLKIT_CONFIG")) path = env;
  }
  if (!path.empty()) c = load_config(path);
  if (f.top) c.top = *f.top;
  if (f.out_dir) c.out_dir = *f.out_dir;
  if (f.cycles) c.cycles = *f.cycles;
  if (f.vcd) c.vcd = *f.vcd;
  if (!f.trace.empty()) c.trace = f.trace;
  if (f.seed) c.seed = *f.seed;
  return c;
}

int cmd_build(const Flags& f, std::ostream& out) {
  ProjectConfig c = merged(f);
  const auto& info = find_top(c.top);
  Session s;
  Entity& top = info.make(s, {c.seed});
  vhdl::Converter conv(s, top.id());
  auto result = conv.run();
  vhdl::write_output(result, c.out_dir);
  out << fmt::format("converted {} in {} pass{}: {} files in {}\n", c.top, result.passes,
                     result.passes == 1 ? "" : "es", result.documents.size() + 1, c.out_dir);
  return ok;
}

int cmd_sim(const Flags& f, std::ostream& out) {
  ProjectConfig c = merged(f);
  const auto& info = find_top(c.top);
  SimOptions opts;
  opts.trace = c.trace;
  opts.trace_variables = f.trace_variables;
  opts.engine = f.engine == "interpreted" ? Engine::interpreted : Engine::compiled;
  Session s;

  if (f.cosim_port) {
    if (!info.stream) fail(ErrorKind::cosim, c.top + " has no stream input and output to bridge");
    auto& harness = s.make_top<designs::StreamHarness>("cosim", info.stream);
    cosim::BridgeOptions bo;
    bo.sim = opts;
    cosim::Bridge bridge(s, harness, bo);
    bridge.listen(*f.cosim_port);
    out << fmt::format("listening on 127.0.0.1:{}\n", bridge.port()) << std::flush;
    bridge.serve_client();
    out << fmt::format("client disconnected at tick {}\n", bridge.simulator().now());
    return ok;
  }

  Entity& top = info.make(s, {c.seed});
  Simulator sim(s, top.id(), opts);
  std::filesystem::path vcd = c.vcd.empty() ? std::filesystem::path(c.out_dir) / (c.top + ".vcd")
                                            : std::filesystem::path(c.vcd);
  std::ostringstream wave;
  sim.attach_vcd(wave);
  sim.run_cycles(c.cycles);
  sim.finish();
  write_file(vcd, wave.str());
  std::filesystem::path report =
      f.report.empty() ? std::filesystem::path(c.out_dir) / (c.top + "_report.json") : std::filesystem::path(f.report);
  write_file(report, sim.report().to_json().dump(2) + "\n");
  out << fmt::format("simulated {} for {} cycles ({} ticks): {} and {}\n", c.top, c.cycles, sim.ticks(),
                     vcd.string(), report.string());
  return ok;
}

int cmd_graph(const Flags& f, std::ostream& out) {
  ProjectConfig c = merged(f);
  const auto& info = find_top(c.top);
  Session s;
  Entity& top = info.make(s, {c.seed});
  s.freeze(top.id());
  auto g = connection_graph(s.design(), top.id());
  bool json = f.format == "json";
  std::filesystem::path path = f.output.empty()
                                   ? std::filesystem::path(c.out_dir) / (c.top + (json ? ".json" : ".dot"))
                                   : std::filesystem::path(f.output);
  write_file(path, json ? g.to_json().dump(2) + "\n" : g.to_dot());
  out << fmt::format("wrote {} ({} nodes, {} edges)\n", path.string(), g.nodes.size(), g.edges.size());
  return ok;
}

}  // namespace

ProjectConfig parse_config(std::istream& in, const std::string& origin) {
  ProjectConfig c;
  std::string line;
  for (unsigned no = 1; std::getline(in, line); ++no) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    std::string where = fmt::format("{}:{}", origin, no);
    if (eq == std::string::npos) fail(ErrorKind::config, where + ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "top") {
      c.top = value;
    } else if (key == "out_dir") {
      c.out_dir = value;
    } else if (key == "cycles") {
      c.cycles = parse_uint(value, where);
    } else if (key == "vcd") {
      c.vcd = value;
    } else if (key == "trace") {
      c.trace = split_list(value);
    } else if (key == "seed") {
      c.seed = parse_uint(value, where);
    } else {
      fail(ErrorKind::config, fmt::format("{}: unknown key '{}'", where, key));
    }
  }
  return c;
}

ProjectConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::config, "cannot read config file " + path);
  return parse_config(f, path);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return usage;
    case ErrorKind::no_progress: return no_progress;
    case ErrorKind::oscillation: return oscillation;
    case ErrorKind::io: return io;
    case ErrorKind::grammar:
    case ErrorKind::naming: return grammar;
    case ErrorKind::cosim: return cosim;
    default: return elaboration;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elaborate, simulate, convert and inspect hardware designs", "hdlkit"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "Project config file (default: $HDLKIT_CONFIG)");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--top", f.top, "Top design name");
    sub->add_option("--out-dir", f.out_dir, "Output directory");
    sub->add_option("--seed", f.seed, "Seed for randomized designs");
  };
  auto* build = app.add_subcommand("build", "Convert a design to VHDL");
  common(build);
  auto* sim = app.add_subcommand("sim", "Simulate a design, writing a VCD and a JSON report");
  common(sim);
  sim->add_option("--cycles", f.cycles, "Clock cycles to simulate");
  sim->add_option("--vcd", f.vcd, "VCD output path");
  sim->add_option("--trace", f.trace, "Traced net path globs");
  sim->add_option("--report", f.report, "JSON report path");
  sim->add_option("--engine", f.engine, "Statement engine")->check(CLI::IsMember({"compiled", "interpreted"}));
  sim->add_flag("--trace-variables", f.trace_variables, "Trace variables as well as signals");
  sim->add_option("--cosim-port", f.cosim_port, "Serve the design over TCP on this port");
  auto* graph = app.add_subcommand("graph", "Export the connection graph");
  common(graph);
  graph->add_option("--format", f.format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
  graph->add_option("--output", f.output, "Output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n" << app.help();
    return usage;
  }

  try {
    if (build->parsed()) return cmd_build(f, out);
    if (sim->parsed()) return cmd_sim(f, out);
    return cmd_graph(f, out);
  } catch (const Error& e) {
    err << "error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error[io]: " << e.what() << "\n";
    return io;
  }
}

}  // namespace hdlkit::cli
