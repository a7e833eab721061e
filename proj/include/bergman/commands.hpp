#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace bergman {

// Exit status: 0 success, 1 computation error (or a failed verify), 2 config error.
int run_command(const std::string& sub, const std::string& config_path, const std::optional<std::string>& out_dir,
                std::ostream& out, std::ostream& err);

} // namespace bergman
