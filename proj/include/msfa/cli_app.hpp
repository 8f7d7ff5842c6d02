#pragma once

namespace msfa {

/// Batch entry point (estimate / simulate / factors subcommands). Returns a
/// process exit code; all diagnostics go to stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace msfa
