#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include "commands.hpp"

namespace {

using cli::Json;

int exit_code(pl_status s) {
  switch (s) {
    case PL_ERR_ARGUMENT:
    case PL_ERR_DEGENERATE: return 2;
    case PL_ERR_RESOURCE: return 3;
    default: return 1;
  }
}

// Option values as given, or their defaults. Re-running with these reproduces the output.
Json collect_params(const CLI::App* sub) {
  Json params = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      if (opt->get_items_expected_max() == 0) {
        params[name] = r.empty() ? "true" : r.back();
      } else {
        std::string joined;
        for (std::size_t i = 0; i < r.size(); ++i) joined += (i ? "," : "") + r[i];
        params[name] = joined;
      }
    } else if (opt->get_items_expected_max() == 0) {
      params[name] = opt->get_default_str().empty() ? "false" : opt->get_default_str();
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    } else {
      params[name] = nullptr;
    }
  }
  return params;
}

// First positional token, when it names no subcommand.
std::optional<std::string> unknown_subcommand(const CLI::App& app, int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--format" || a == "--manifest" || a == "--threads") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    for (const CLI::App* sub : app.get_subcommands({})) {
      if (sub->get_name() == a) return std::nullopt;
    }
    return a;
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const auto started = std::chrono::steady_clock::now();

  CLI::App app{"primelab: prime constellations, sieve weights and gap statistics"};
  app.set_version_flag("--version", std::string(pl_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  std::string manifest_path;
  unsigned threads = 0;
  app.add_option("--format", format, "Output format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--manifest", manifest_path, "Write the run manifest here instead of standard error");
  app.add_option("--threads", threads, "Worker threads; 0 uses every core")->capture_default_str();

  const auto commands = cli::register_commands(app);

  Json argv_json = Json::array();
  for (int i = 0; i < argc; ++i) argv_json.push_back(argv[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (const auto unknown = unknown_subcommand(app, argc, argv)) {
      std::cerr << "error: unknown subcommand '" << *unknown << "'\n\n" << app.help();
    } else {
      std::cerr << "error: " << e.what() << "\n\n" << app.help();
    }
    return 2;
  }

  pl_set_threads(threads);
  cli::Emitter out(format == "csv" ? cli::Format::Csv : cli::Format::Json, std::cout);

  const cli::Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) chosen = &c;
  }

  int code = 0;
  std::string error;
  try {
    chosen->run(out);
  } catch (const cli::UsageError& e) {
    code = 2;
    error = e.what();
    std::cerr << "error: " << e.what() << "\n\n" << chosen->app->help();
  } catch (const cli::LibraryError& e) {
    code = exit_code(e.status);
    error = e.what();
    std::cerr << "error (" << pl_status_name(e.status) << "): " << e.what() << '\n';
  }
  std::cout.flush();

  Json params = collect_params(chosen->app);
  const std::string canonical = params.dump();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  Json manifest{{"tool", "primelab"},
                {"version", pl_version()},
                {"subcommand", chosen->app->get_name()},
                {"params", std::move(params)},
                {"format", format},
                {"threads", threads},
                {"argv", argv_json},
                {"exit_code", code},
                {"error", error.empty() ? Json(nullptr) : Json(error)},
                {"records", out.records()},
                {"duration_seconds", seconds},
                {"checksums", {{"params_sha256", cli::sha256_hex(canonical)}, {"output_sha256", out.checksum()}}}};
  if (manifest_path.empty()) {
    std::cerr << manifest.dump() << '\n';
  } else {
    std::ofstream f(manifest_path);
    f << manifest.dump(2) << '\n';
    if (!f) {
      std::cerr << "error: cannot write manifest to " << manifest_path << '\n';
      if (code == 0) code = 3;
    }
  }
  return code;
}
