// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HPBEM_CLI_HPP
#define HPBEM_CLI_HPP

#include <string>
#include <vector>

namespace hpbem {

// Batch experiment harness. Subcommands: infsup, commute-check,
// interp-stability, fracform-check, piola-check, efie-solve, convergence.
// Every subcommand writes a CSV with a header row. Exit codes: 0 success,
// 1 validation failure, 2 acceptance-threshold violation under --assert.
int run(const std::vector<std::string>& args);

} // namespace hpbem

#endif
