// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Umbrella header: the full ghost-dsm library.
#pragma once

#include "gdsm/core.hpp"
#include "gdsm/diagnostics.hpp"
#include "gdsm/driver.hpp"
#include "gdsm/io.hpp"
#include "gdsm/library.hpp"
#include "gdsm/nonsmooth.hpp"
#include "gdsm/polyhedral_set.hpp"
#include "gdsm/problem.hpp"
#include "gdsm/qp.hpp"
#include "gdsm/subproblems.hpp"
#include "gdsm/surrogate.hpp"
