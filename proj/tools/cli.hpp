#pragma once

// Entry point of the softops command line; returns the process exit code
// (0 success, 1 check failure, 2 usage or configuration error).
int cli_main(int argc, const char* const* argv);
