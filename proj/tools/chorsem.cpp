// chorsem: check, explore, trace and simulate choreography models.
//
// Exit codes: 0 success, 1 model errors, 2 predicate not found, 3 I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chorsem/bpel_import.hpp"
#include "chorsem/dsl.hpp"
#include "chorsem/explorer.hpp"

namespace {

using namespace chorsem;

constexpr int kOk = 0;
constexpr int kModelError = 1;
constexpr int kNotFound = 2;
constexpr int kIoError = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << data;
  if (!out) throw IoError("cannot write '" + path + "'");
}

struct ModelOptions {
  std::string path;
  std::string expiry_target;
  std::vector<Value> open_domain;
  bool urgent_internal = false;
};

void add_model_options(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("model", m.path, "Model file (.brf)")->required();
  cmd->add_option("--expiry-target", m.expiry_target,
                  "Who receives expiry handlers: creator, subscribers, both")
      ->check(CLI::IsMember({"creator", "subscribers", "both"}));
  cmd->add_option("--open-domain", m.open_domain,
                  "Environment values for unmatched communication")
      ->delimiter(',');
  cmd->add_flag("--urgent-internal", m.urgent_internal,
                "Time waits for pending internal actions");
}

// Loads, applies overrides, validates. Diagnostics go to stderr.
std::optional<ChoreographyDef> load(const ModelOptions& m) {
  SourceModel src = load_model_text(read_file(m.path), m.path);
  if (src.def) {
    if (!m.expiry_target.empty())
      src.def->config.expiry_target = *parse_expiry_target(m.expiry_target);
    if (!m.open_domain.empty()) src.def->config.open_domain = m.open_domain;
    if (m.urgent_internal) src.def->config.urgent_internal = true;
    src.diagnostics = validate_model(*src.def);
  }
  for (const auto& d : src.diagnostics)
    std::cerr << m.path << ":" << to_string(d) << "\n";
  if (!src.def || has_errors(src.diagnostics)) return std::nullopt;
  return std::move(src.def);
}

struct LimitOptions {
  std::size_t max_states = 100000;
  std::size_t max_depth = 100000;
  std::size_t max_delay_steps = 1000;

  Limits limits() const { return {max_states, max_depth, max_delay_steps}; }
};

void add_limit_options(CLI::App* cmd, LimitOptions& l) {
  cmd->add_option("--max-states", l.max_states, "State limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-depth", l.max_depth, "Depth limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-delay-steps", l.max_delay_steps,
                  "Delay transitions allowed on a path")
      ->check(CLI::PositiveNumber);
}

void print_trace(const Trace& t) {
  std::cout << "s" << t.states.front() << "\n";
  for (std::size_t i = 0; i < t.labels.size(); ++i)
    std::cout << "  " << t.labels[i].text << "\ns" << t.states[i + 1] << "\n";
}

std::vector<std::string> read_patterns(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Executable semantics for BPEL choreographies with leased "
               "resources"};
  app.require_subcommand(1);

  ModelOptions model;
  LimitOptions limits;

  auto* check = app.add_subcommand("check", "Parse and validate a model");
  add_model_options(check, model);

  std::string json_out, dot_out;
  auto* explore_cmd =
      app.add_subcommand("explore", "Build the transition system");
  add_model_options(explore_cmd, model);
  add_limit_options(explore_cmd, limits);
  explore_cmd->add_option("--json", json_out, "Write the LTS as JSON");
  explore_cmd->add_option("--dot", dot_out, "Write the LTS as DOT");

  std::string target, labels_file;
  auto* trace = app.add_subcommand("trace", "Shortest trace to a predicate");
  add_model_options(trace, model);
  add_limit_options(trace, limits);
  auto* to_opt =
      trace->add_option("--to", target, "terminal-success, deadlock, timelock")
          ->check(CLI::IsMember({"terminal-success", "deadlock", "timelock"}));
  auto* labels_opt = trace->add_option(
      "--labels", labels_file, "File with label patterns to match in order");
  to_opt->excludes(labels_opt);

  std::uint64_t seed = 1;
  std::size_t steps = 100;
  auto* simulate = app.add_subcommand("simulate", "Seeded random walk");
  add_model_options(simulate, model);
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--steps", steps, "Maximum number of steps");

  std::string bindings_path, import_out;
  std::vector<std::string> xml_paths;
  auto* import = app.add_subcommand(
      "import-bpel", "Translate BPEL/WSRF process documents to a model");
  import->add_option("bindings", bindings_path, "Bindings JSON")->required();
  import->add_option("processes", xml_paths,
                     "Process documents (default: listed in the bindings)");
  import->add_option("-o,--output", import_out, "Output model (default stdout)");

  std::string lts_path, render_out;
  auto* render = app.add_subcommand("render", "DOT from a saved JSON LTS");
  render->add_option("lts", lts_path, "LTS JSON file")->required();
  render->add_option("-o,--output", render_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      return load(model) ? kOk : kModelError;
    }

    if (*explore_cmd) {
      auto def = load(model);
      if (!def) return kModelError;
      Lts lts = explore(*def, limits.limits());
      std::cout << "states: " << lts.states.size() << "\n"
                << "edges: " << lts.edges.size() << "\n"
                << "limits hit: " << (lts.limits_hit ? "yes" : "no") << "\n";
      for (unsigned f : {kTerminalSuccess, kDeadlock, kTimelock, kFrontierCut})
        std::cout << flag_names(f).front() << ": " << lts.count(f) << "\n";
      if (!json_out.empty() || !dot_out.empty()) {
        LtsDocument doc = to_document(lts);
        if (!json_out.empty()) write_output(json_out, export_json(doc));
        if (!dot_out.empty()) write_output(dot_out, export_dot(doc));
      }
      return kOk;
    }

    if (*trace) {
      if (target.empty() && labels_file.empty()) {
        std::cerr << "trace: give --to or --labels\n";
        return kModelError;
      }
      auto def = load(model);
      if (!def) return kModelError;
      std::vector<std::string> patterns;
      if (!labels_file.empty()) patterns = read_patterns(labels_file);
      Lts lts = explore(*def, limits.limits());
      std::optional<Trace> t;
      if (!labels_file.empty()) {
        t = find_trace_labels(lts, patterns);
      } else {
        unsigned flag = target == "terminal-success" ? kTerminalSuccess
                        : target == "deadlock"       ? kDeadlock
                                                     : kTimelock;
        t = find_trace(lts, [&](std::size_t s) { return lts.flags[s] & flag; });
      }
      if (!t) {
        std::cerr << "no trace found";
        if (lts.limits_hit) std::cerr << " (exploration hit its limits)";
        std::cerr << "\n";
        return kNotFound;
      }
      print_trace(*t);
      return kOk;
    }

    if (*simulate) {
      auto def = load(model);
      if (!def) return kModelError;
      Walk w = random_walk(*def, seed, steps);
      for (const auto& l : w.labels) std::cout << l.text << "\n";
      if (is_terminal(w.states.back())) std::cout << "# terminal\n";
      return kOk;
    }

    if (*import) {
      Bindings b = parse_bindings(read_file(bindings_path));
      std::vector<std::string> paths = xml_paths;
      std::filesystem::path base =
          std::filesystem::path(bindings_path).parent_path();
      if (paths.empty())
        for (const auto& p : b.processes) paths.push_back((base / p).string());
      std::vector<ImportUnit> units;
      for (const auto& p : paths) units.push_back({p, read_file(p)});
      ChoreographyDef def = import_bpel(units, b);
      auto diags = validate_model(def);
      for (const auto& d : diags) std::cerr << to_string(d) << "\n";
      if (has_errors(diags)) return kModelError;
      write_output(import_out, print_model(def));
      return kOk;
    }

    if (*render) {
      LtsDocument doc = load_json(read_file(lts_path));
      write_output(render_out, export_dot(doc));
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModelError;
  }
  return kOk;
}
