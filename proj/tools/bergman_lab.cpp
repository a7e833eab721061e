#include "bergman/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Bergman polynomial experiments"};
    app.require_subcommand(1);
    std::string config;
    std::string out;
    for (const char* name : {"ortho", "tables", "zeros", "asymptotics", "continuation", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "experiment config (JSON)")->required();
        sub->add_option("--out", out, "output directory (overrides the config)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    std::optional<std::string> dir;
    if (!out.empty())
        dir = out;
    return bergman::run_command(app.get_subcommands().front()->get_name(), config, dir, std::cout, std::cerr);
}
