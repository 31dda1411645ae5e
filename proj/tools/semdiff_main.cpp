// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "semdiff/cli.hpp"

int main(int argc, char** argv) {
    return semdiff::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
