// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli_common.hpp"

#include <phishhook/error.hpp>

#include <algorithm>
#include <iostream>

namespace
{
std::string one_line(std::string text)
{
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}
}  // namespace

int main(int argc, char** argv)
{
    using namespace phishhook;
    CLI::App app{"Phishing smart-contract detection from EVM bytecode", "phishhook"};
    app.set_version_flag("--version", "phishhook 0.1.0");
    app.require_subcommand(1);

    std::vector<std::pair<CLI::App*, cli::Command>> commands;
    cli::register_data_commands(app, commands);
    cli::register_model_commands(app, commands);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        std::cerr << "error: usage: " << one_line(e.what()) << '\n';
        return 2;
    }

    try
    {
        for (auto& [sub, run] : commands)
            if (sub->parsed())
            {
                if (const auto* opt = sub->get_option("--config"); opt->count() > 0)
                    cli::apply_json_config(*sub, opt->as<std::string>());
                run();
            }
    }
    catch (const CLI::ParseError& e)
    {
        std::cerr << "error: usage: " << one_line(e.what()) << '\n';
        return 2;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
        return 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: internal: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 0;
}
