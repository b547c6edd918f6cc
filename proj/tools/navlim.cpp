// SPDX-FileCopyrightText: Copyright (c) 2026 navlim contributors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "navlim/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return navlim::cli::run(args, std::cout, std::cerr);
}
