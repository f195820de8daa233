#pragma once

#include <functional>
#include <vector>

#include <CLI11.hpp>

#include "support.hpp"

namespace cli {

struct Command {
  CLI::App* app;
  std::function<void(Emitter&)> run;
};

std::vector<Command> register_commands(CLI::App& app);

}  // namespace cli
