// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "gdsm/cli.hpp"

int main(int argc, char** argv) { return gdsm::cli_main(argc, argv); }
