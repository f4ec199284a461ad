// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include "hpbem/cli.hpp"

int main(int argc, char** argv)
{
  return hpbem::run(std::vector<std::string>(argv + 1, argv + argc));
}
