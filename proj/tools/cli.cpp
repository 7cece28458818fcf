#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "anisoframe/errors.hpp"
#include "anisoframe/format.hpp"
#include "anisoframe/rnla.hpp"
#include "commands.hpp"

namespace anisoframe::cli {

namespace {

struct Failure {
  int code;
  std::string kind;
  std::string message;
};

std::string config_token(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return fmt17(v.get<double>());
  if (v.is_number()) return v.dump();
  throw ParameterError("config values must be scalars");
}

Json read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(is);
  } catch (const Json::exception& e) {
    throw FormatError("config " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  return j;
}

// Value of --config wherever it appears, or empty.
std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return "";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto started = std::chrono::steady_clock::now();
  std::unique_ptr<OutDir> outdir;
  auto fail = [&](const Failure& f) {
    if (outdir) outdir->mark_failed(f.kind + ": " + f.message);
    err << dump_json_line(Json{{"error", f.kind}, {"message", f.message}}) << '\n';
    return f.code;
  };

  CLI::App app{"Anisotropic frame and sequence-space toolkit", "anisoframe"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  Common common;
  struct Slot {
    CLI::App* sub;
    std::unique_ptr<Binder> binder;
    std::function<Outcome(const Common&, const OutDir&)> runner;
  };
  std::vector<Slot> slots;
  const auto commands = all_commands();
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    auto binder = std::make_unique<Binder>(sub);
    binder->opt("out-dir", common.out_dir, "output directory");
    binder->opt("seed", common.seed, "corpus seed");
    binder->opt("oracle", common.oracle, "approximation oracle: exact or greedy");
    sub->add_option("--config", common.config, "JSON file of option values; flags override it");
    auto runner = cmd.setup(*binder);
    slots.push_back({sub, std::move(binder), std::move(runner)});
  }

  try {
    // The subcommand goes first; everything else belongs to it.
    std::size_t pos = args.size();
    for (std::size_t i = 0; i < args.size() && pos == args.size(); ++i)
      for (const auto& cmd : commands)
        if (args[i] == cmd.name) pos = i;
    if (pos != args.size()) {
      std::rotate(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(pos), args.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
    } else if (!args.empty() && args[0].rfind("-", 0) != 0) {
      throw CLI::ValidationError("unknown subcommand '" + args[0] + "'");
    }
    const std::string config_path = find_config(args);
    if (!config_path.empty()) {
      Json cfg = read_config(config_path);
      if (pos == args.size()) {
        if (!cfg.contains("subcommand") || !cfg["subcommand"].is_string())
          throw CLI::RequiredError("a subcommand (argument or config key 'subcommand')");
        const std::string name = cfg["subcommand"].get<std::string>();
        if (!app.get_subcommand_no_throw(name)) throw CLI::ValidationError("unknown subcommand '" + name + "'");
        args.insert(args.begin(), name);
      }
      // Splice config values in right after the subcommand so explicit flags win.
      std::vector<std::string> extra;
      for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (it.key() == "subcommand" || it.key() == "config") continue;
        extra.push_back("--" + it.key());
        extra.push_back(config_token(it.value()));
      }
      args.insert(args.begin() + 1, extra.begin(), extra.end());
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail({2, "usage", e.what()});
  } catch (const FormatError& e) {
    return fail({3, "input", e.what()});
  } catch (const std::exception& e) {
    return fail({2, "usage", e.what()});
  }

  const Slot* chosen = nullptr;
  for (const auto& s : slots)
    if (s.sub->parsed()) chosen = &s;
  if (!chosen) return fail({2, "usage", "no subcommand"});

  try {
    outdir = std::make_unique<OutDir>(common.out_dir);
    outdir->clear_failed();
    (void)parse_oracle(common.oracle);
    Json config = chosen->binder->effective();
    Json full = Json{{"subcommand", chosen->sub->get_name()}};
    for (auto it = config.begin(); it != config.end(); ++it) full[it.key()] = it.value();
    outdir->write_json("config.json", full);

    Outcome o = chosen->runner(common, *outdir);
    Json report = Json{{"subcommand", chosen->sub->get_name()}, {"pass", o.pass}, {"seed", common.seed}};
    report["results"] = o.summary;
    outdir->write_json("report.json", report);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out << dump_json_line(Json{{"subcommand", chosen->sub->get_name()},
                               {"pass", o.pass},
                               {"out_dir", common.out_dir},
                               {"seconds", seconds}})
        << '\n';
    return o.pass ? 0 : 1;
  } catch (const ParameterError& e) {
    return fail({2, "invalid_parameter", e.what()});
  } catch (const InvalidIndex& e) {
    return fail({3, "invalid_index", e.what()});
  } catch (const FormatError& e) {
    return fail({3, "input", e.what()});
  } catch (const CapacityError& e) {
    return fail({3, "capacity", e.what()});
  } catch (const Unsupported& e) {
    return fail({3, "unsupported", e.what()});
  } catch (const std::exception& e) {
    return fail({3, "internal", e.what()});
  }
}

}  // namespace anisoframe::cli
